//! Crate-wide error type.
//!
//! Every fallible operation returns `Result<T, Error>`. Variants are grouped
//! by how the command-line front end maps them to exit codes: anything here
//! is a data/range/domain problem (exit code 2); argument parsing problems
//! never reach this type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// A request exceeded stored or supported precision.
    #[error("range error: {what} requested {requested}, available {available}")]
    Range {
        what: &'static str,
        requested: u64,
        available: u64,
    },

    /// An argument had to be prime and was not.
    #[error("{0} is not prime")]
    NotPrime(u64),

    /// Eisenstein series are only provided in weights 4 and 6.
    #[error("unsupported Eisenstein weight {0}: only 4 and 6 are provided")]
    EisensteinWeight(u32),

    /// Malformed eta-quotient specification.
    #[error("invalid eta quotient: {0}")]
    EtaQuotient(String),

    /// Series inversion requires a unit constant term.
    #[error("series has no inverse: constant term is {0}, expected a unit")]
    NotInvertible(String),

    /// A record violated the normalized-eigenform invariants.
    #[error("invalid record: {0}")]
    Record(String),

    /// Unknown corpus / record identifier.
    #[error("unknown form id {0:?}")]
    UnknownForm(String),

    /// A synthesized record could not be built.
    #[error("invalid twist construction: {0}")]
    InvalidTwist(String),

    /// Dirichlet-character domain errors (bad modulus, non-real values where
    /// real values are required, ...).
    #[error("character error: {0}")]
    Character(String),

    /// Mathematical-domain violation (zero where a nonzero value is needed,
    /// weights breaking a stated precondition, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// Evaluation point outside the zone where the Euler product converges.
    #[error("s = {s} is outside the convergence zone Re(s) > {threshold}")]
    ConvergenceZone { s: String, threshold: f64 },

    /// Gamma evaluation too close to a pole.
    #[error("gamma argument {0} is within 1e-3 of a pole")]
    PoleProximity(String),

    /// Functional-equation evaluation outside the validated region.
    #[error("functional equation refused: {0}")]
    OutsideValidatedRegion(String),

    /// Functional-equation sign unavailable for this record.
    #[error("no stored functional-equation sign for {0:?}")]
    MissingSign(String),

    /// Malformed persisted q-expansion file.
    #[error("bad record file: {0}")]
    BadRecordFile(String),

    /// Cache checksum mismatch (corrupted or stale file).
    #[error("cache checksum mismatch for {0}")]
    CacheChecksum(String),

    /// Malformed configuration file.
    #[error("bad config: {0}")]
    BadConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
