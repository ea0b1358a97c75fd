//! Plain-text persistence for coefficient records.
//!
//! Format: one header line `id weight level cm synthetic bound`, then one
//! decimal coefficient per line, a_1 first, index implicit. The format
//! round-trips bit-exactly: write(read(file)) reproduces the file.

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::str::FromStr;

use num_bigint::BigInt;

use crate::error::{Error, Result};

use super::NewformRecord;

pub fn write_record<W: Write>(rec: &NewformRecord, out: &mut W) -> Result<()> {
    writeln!(
        out,
        "{} {} {} {} {} {}",
        rec.id(),
        rec.weight(),
        rec.level(),
        rec.is_cm(),
        rec.is_synthetic(),
        rec.bound()
    )?;
    for c in rec.coefficients() {
        writeln!(out, "{c}")?;
    }
    Ok(())
}

pub fn read_record<R: BufRead>(input: &mut R) -> Result<NewformRecord> {
    let mut header = String::new();
    if input.read_line(&mut header)? == 0 {
        return Err(Error::BadRecordFile("empty input".into()));
    }
    let fields: Vec<&str> = header.split_whitespace().collect();
    if fields.len() != 6 {
        return Err(Error::BadRecordFile(format!(
            "header must be `id weight level cm synthetic bound`, got {} fields",
            fields.len()
        )));
    }
    let id = fields[0].to_string();
    let weight: u32 = parse_field(fields[1], "weight")?;
    let level: u64 = parse_field(fields[2], "level")?;
    let cm: bool = parse_field(fields[3], "cm")?;
    let synthetic: bool = parse_field(fields[4], "synthetic")?;
    let bound: u64 = parse_field(fields[5], "bound")?;

    let mut coeffs = Vec::with_capacity(bound as usize);
    let mut line = String::new();
    for n in 1..=bound {
        line.clear();
        if input.read_line(&mut line)? == 0 {
            return Err(Error::BadRecordFile(format!(
                "expected {bound} coefficients, file ends after {}",
                n - 1
            )));
        }
        let text = line.trim();
        let value = BigInt::from_str(text).map_err(|_| {
            Error::BadRecordFile(format!("coefficient {n} is not a decimal integer: {text:?}"))
        })?;
        coeffs.push(value);
    }
    // Imported records carry no functional-equation sign; the header format
    // does not transport it.
    NewformRecord::new(id, weight, level, cm, synthetic, None, coeffs)
        .map_err(|e| Error::BadRecordFile(e.to_string()))
}

fn parse_field<T: FromStr>(text: &str, what: &str) -> Result<T> {
    text.parse()
        .map_err(|_| Error::BadRecordFile(format!("bad {what} field: {text:?}")))
}

pub fn write_record_file(rec: &NewformRecord, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_record(rec, &mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}

pub fn read_record_file(path: &Path) -> Result<NewformRecord> {
    let file = fs::File::open(path)?;
    read_record(&mut BufReader::new(file))
}
