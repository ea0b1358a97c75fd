//! Expansion cache and user record storage.
//!
//! Regenerating 10^5-term expansions takes tens of seconds, so records
//! built above the default bound are persisted under the cache directory
//! (`TWISTLAB_CACHE`, default `./.twistlab-cache`). Cache files are the
//! interchange format plus one trailing `checksum <hex>` line over the
//! preceding bytes; a mismatch is an error, not a silent regeneration, so
//! corruption never goes unnoticed. User-imported records live under
//! `records/` in the same directory and take priority over built-ins.

use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::modforms::{
    corpus, corpus_with_bound, find_form, read_record, write_record, NewformRecord,
    DEFAULT_COEFFICIENT_BOUND,
};

pub const CACHE_ENV: &str = "TWISTLAB_CACHE";
pub const DEFAULT_CACHE_DIR: &str = ".twistlab-cache";

pub fn cache_dir() -> PathBuf {
    std::env::var_os(CACHE_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR))
}

pub fn user_records_dir() -> PathBuf {
    cache_dir().join("records")
}

/// FNV-1a, 64-bit: tiny, stable, good enough to catch truncation and edits.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

/// Write via a sibling temp file and rename, so readers never observe a
/// half-written file.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent)?;
        }
    }
    let tmp = path.with_extension("tmp");
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn cache_file(id: &str, bound: u64) -> PathBuf {
    cache_dir().join(format!("{id}.{bound}.qexp"))
}

pub fn store_cached(record: &NewformRecord) -> Result<()> {
    let mut body = Vec::new();
    write_record(record, &mut body)?;
    let line = format!("checksum {:016x}\n", fnv1a64(&body));
    body.extend_from_slice(line.as_bytes());
    atomic_write(&cache_file(record.id(), record.bound()), &body)
}

/// Some(record) on a verified hit, None on a miss, an error on corruption.
pub fn load_cached(id: &str, bound: u64) -> Result<Option<NewformRecord>> {
    let path = cache_file(id, bound);
    let body = match fs::read(&path) {
        Ok(b) => b,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(None),
        Err(e) => return Err(e.into()),
    };
    let text = String::from_utf8(body)
        .map_err(|_| Error::CacheChecksum(path.display().to_string()))?;
    let Some(split) = text.rfind("checksum ") else {
        return Err(Error::CacheChecksum(path.display().to_string()));
    };
    let (payload, tail) = text.split_at(split);
    let stored = tail
        .trim_end()
        .strip_prefix("checksum ")
        .and_then(|h| u64::from_str_radix(h, 16).ok())
        .ok_or_else(|| Error::CacheChecksum(path.display().to_string()))?;
    if stored != fnv1a64(payload.as_bytes()) {
        return Err(Error::CacheChecksum(path.display().to_string()));
    }
    let record = read_record(&mut payload.as_bytes())?;
    Ok(Some(record))
}

/// User records, sorted by id for stable listings.
pub fn user_records() -> Result<Vec<NewformRecord>> {
    let dir = user_records_dir();
    let mut out = Vec::new();
    let entries = match fs::read_dir(&dir) {
        Ok(e) => e,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(Vec::new()),
        Err(e) => return Err(e.into()),
    };
    for entry in entries {
        let path = entry?.path();
        if path.extension().and_then(|e| e.to_str()) == Some("qexp") {
            out.push(crate::modforms::read_record_file(&path)?);
        }
    }
    out.sort_by(|a, b| a.id().cmp(b.id()));
    Ok(out)
}

/// Resolve a form id to a record with at least `need_bound` coefficients.
///
/// Priority: user-imported records (exact data as imported), then built-ins
/// served from the in-process corpus, the checksummed cache, or a fresh
/// regeneration (which warms the cache for every corpus member at that
/// bound). Functional-equation signs survive cache round-trips because they
/// are restored from the corpus table, not the file.
pub fn resolve_form(id: &str, need_bound: u64) -> Result<NewformRecord> {
    for user in user_records()? {
        if user.id() == id {
            if user.bound() < need_bound {
                return Err(Error::Range {
                    what: "user record bound",
                    requested: need_bound,
                    available: user.bound(),
                });
            }
            return Ok(user);
        }
    }

    let builtin = find_form(corpus(), id)?;
    if need_bound <= DEFAULT_COEFFICIENT_BOUND {
        return Ok(builtin.clone());
    }
    let canonical = builtin.id().to_string();
    if let Some(mut cached) = load_cached(&canonical, need_bound)? {
        cached.set_fe_sign(builtin.fe_sign());
        return Ok(cached);
    }
    let regenerated = corpus_with_bound(need_bound);
    for record in &regenerated {
        store_cached(record)?;
    }
    let found = find_form(&regenerated, id)?.clone();
    Ok(found)
}
