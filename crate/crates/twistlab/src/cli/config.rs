//! Run configuration: defaults, flat `key = value` config files, and the
//! flag-over-file-over-default merge.

use serde::Serialize;
use std::path::Path;
use std::str::FromStr;

use crate::comparator::WeightConvention;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

impl FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "text" => Ok(OutputFormat::Text),
            "json" => Ok(OutputFormat::Json),
            "csv" => Ok(OutputFormat::Csv),
            other => Err(Error::BadConfig(format!(
                "unknown output format {other:?}: expected text, json, or csv"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub coefficient_bound: u64,
    pub density_x: u64,
    pub modulus_bound: u64,
    pub weight_convention: WeightConvention,
    pub tail_window: usize,
    pub output_format: OutputFormat,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            coefficient_bound: 10_000,
            density_x: 100_000,
            modulus_bound: 16,
            weight_convention: WeightConvention::default(),
            tail_window: 3,
            output_format: OutputFormat::Text,
        }
    }
}

impl RunConfig {
    /// Apply one `key = value` assignment.
    fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &str, value: &str) -> Result<T> {
            value
                .parse()
                .map_err(|_| Error::BadConfig(format!("bad value for {key}: {value:?}")))
        }
        match key {
            "coefficient_bound" => self.coefficient_bound = num(key, value)?,
            "density_x" => self.density_x = num(key, value)?,
            "modulus_bound" => self.modulus_bound = num(key, value)?,
            "weight_convention" => self.weight_convention = value.parse()?,
            "tail_window" => self.tail_window = num(key, value)?,
            "output_format" => self.output_format = value.parse()?,
            other => {
                return Err(Error::BadConfig(format!("unknown config key {other:?}")));
            }
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.coefficient_bound < 100 {
            return Err(Error::BadConfig(
                "coefficient_bound must be at least 100".into(),
            ));
        }
        if self.density_x < 2 || self.modulus_bound < 1 || self.tail_window < 1 {
            return Err(Error::BadConfig(
                "density_x, modulus_bound, and tail_window must be positive (density_x >= 2)"
                    .into(),
            ));
        }
        Ok(())
    }

    /// Parse a flat config file: one `key = value` per line, `#` comments.
    pub fn merge_file(&mut self, path: &Path) -> Result<()> {
        let body = std::fs::read_to_string(path)?;
        for (idx, raw) in body.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                return Err(Error::BadConfig(format!(
                    "{}:{}: expected key = value, got {raw:?}",
                    path.display(),
                    idx + 1
                )));
            };
            self.set(key.trim(), value.trim())?;
        }
        Ok(())
    }
}
