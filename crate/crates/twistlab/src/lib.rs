//! Exact arithmetic for comparing Hecke eigenforms by their normalized
//! coefficient traces.
//!
//! The crate computes q-expansions with exact rational coefficients, builds
//! a small corpus of classical eigenforms, decides coincidence of normalized
//! coefficients prime by prime, searches for and verifies twist certificates
//! (a Tate-twist power together with a Dirichlet character), and runs the
//! numeric L-function consistency checks that pin the twist power to zero.
//!
//! Modules mirror the pipeline:
//!
//! * [`series`]: truncated q-expansions, eta quotients, Eisenstein series
//! * [`modforms`]: eigenform records, Hecke operators, the built-in corpus
//! * [`characters`]: Dirichlet characters with exact cyclotomic values
//! * [`comparator`]: coincidence sets, vanishing sets, density estimates
//! * [`twist`]: certificate search and independent verification
//! * [`lfunc`]: Euler products, gamma-factor identities, functional-equation
//!   residuals
//! * [`cli`]: configuration, reports, cache, and the command layer used by
//!   the `twistlab` binary
//!
//! The `examples/` directory is the guided tour; each example exercises one
//! capability end to end.

pub mod characters;
pub mod cli;
pub mod comparator;
pub mod error;
pub mod lfunc;
pub mod modforms;
pub mod primes;
pub mod series;
pub mod twist;

pub use error::{Error, Result};
