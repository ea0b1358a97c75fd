//! Command-line front end.
//!
//! Exit codes: 0 success, 1 bad usage, 2 data or numeric failure, 3 ran
//! fine but produced no certificate.

pub mod cache;
pub mod commands;
pub mod config;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use std::path::{Path, PathBuf};

use crate::cli::commands::CommandOutput;
use crate::cli::config::{OutputFormat, RunConfig};
use crate::error::{Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "twistlab",
    version,
    about = "q-expansions, trace coincidence, twist certificates, L-function checks"
)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct GlobalArgs {
    /// KEY = VALUE config file (default: ./twistlab.conf when present).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override coefficient_bound.
    #[arg(long, global = true, value_name = "N")]
    bound: Option<u64>,
    /// Override weight_convention (motivic | statement).
    #[arg(long, global = true, value_name = "NAME")]
    weight_convention: Option<String>,
    /// Override tail_window for density estimates.
    #[arg(long, global = true, value_name = "N")]
    tail_window: Option<usize>,
    /// Output format: text | json | csv.
    #[arg(long, short = 'f', global = true, value_name = "FMT")]
    format: Option<String>,
    /// Write the report to this file instead of stdout.
    #[arg(long, short = 'o', global = true, value_name = "PATH")]
    output: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Inspect, export, and import stored q-expansions.
    Corpus {
        #[command(subcommand)]
        cmd: CorpusCmd,
    },
    /// Compare normalized Hecke traces of two forms prime by prime.
    Compare {
        #[arg(long)]
        f1: String,
        #[arg(long)]
        f2: String,
        /// Prime cutoff (default: density_x).
        #[arg(long)]
        x: Option<u64>,
    },
    /// Search for chi and r with a_p(f1) = chi(p) a_p(f2) p^r at good p.
    DetectTwist {
        #[arg(long)]
        f1: String,
        #[arg(long)]
        f2: String,
        /// Coefficient cutoff (default: coefficient_bound).
        #[arg(long)]
        x: Option<u64>,
        /// Largest character modulus to try (default: modulus_bound).
        #[arg(long)]
        modulus_bound: Option<u64>,
    },
    /// Density of vanishing Hecke eigenvalues over primes.
    Density {
        #[arg(long)]
        form: String,
        /// Prime cutoff (default: density_x).
        #[arg(long)]
        x: Option<u64>,
    },
    /// L-function numerics.
    Lfunc {
        #[command(subcommand)]
        cmd: LfuncCmd,
    },
}

#[derive(Subcommand, Debug)]
enum CorpusCmd {
    /// List built-in and imported forms.
    List,
    /// Write a form's coefficient record to a file.
    Export {
        #[arg(long)]
        form: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Validate a record file and add it to the user corpus.
    Import {
        #[arg(long)]
        file: PathBuf,
    },
}

#[derive(Subcommand, Debug)]
enum LfuncCmd {
    /// Check Gamma(s) / Gamma(s - m) against the falling-factorial product.
    Gamma {
        /// Complex point, RE or RE,IM.
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        #[arg(long)]
        m: u32,
    },
    /// Zeros of 1 - alpha p^(-s) along their vertical lattice.
    Lattice {
        /// Reciprocal root, RE or RE,IM.
        #[arg(long, allow_hyphen_values = true)]
        alpha: String,
        #[arg(long)]
        p: u64,
        #[arg(long, default_value_t = -2, allow_hyphen_values = true)]
        n_min: i64,
        #[arg(long, default_value_t = 2, allow_hyphen_values = true)]
        n_max: i64,
    },
    /// Relative error of L(f x n^r, s) = L(f, s - r) away from level primes.
    Shift {
        #[arg(long)]
        form: String,
        #[arg(long, default_value_t = 0)]
        r: u32,
        /// Complex point, RE or RE,IM. Needs Re(s) - r past the convergence line.
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        /// Drop Euler factors at primes dividing M (default: the level).
        #[arg(long)]
        m: Option<u64>,
        /// Dirichlet-series cutoff (default: the stored bound).
        #[arg(long)]
        cutoff: Option<u64>,
    },
    /// Zero/pole bookkeeping for a weight drop k1 -> k2 = k1 - 2r.
    Obstruction {
        #[arg(long)]
        k1: u32,
        #[arg(long)]
        k2: u32,
        /// Twist power (default: (k1 - k2) / 2).
        #[arg(long)]
        r: Option<u32>,
        /// Optional pair of forms supplying local Euler data.
        #[arg(long)]
        f1: Option<String>,
        #[arg(long)]
        f2: Option<String>,
    },
    /// Residual of the completed-L functional equation near the center.
    Feq {
        #[arg(long)]
        form: String,
        /// Complex point, RE or RE,IM; must sit in the validated strip.
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        /// Smoothed Dirichlet terms (default: 1000).
        #[arg(long)]
        terms: Option<u64>,
    },
}

fn build_config(g: &GlobalArgs) -> Result<RunConfig> {
    let mut config = RunConfig::default();
    match &g.config {
        Some(path) => {
            if !path.exists() {
                return Err(Error::BadConfig(format!(
                    "config file {} does not exist",
                    path.display()
                )));
            }
            config.merge_file(path)?;
        }
        None => {
            let fallback = Path::new("twistlab.conf");
            if fallback.exists() {
                config.merge_file(fallback)?;
            }
        }
    }
    if let Some(bound) = g.bound {
        config.coefficient_bound = bound;
    }
    if let Some(convention) = &g.weight_convention {
        config.weight_convention = convention.parse()?;
    }
    if let Some(window) = g.tail_window {
        config.tail_window = window;
    }
    if let Some(format) = &g.format {
        config.output_format = format.parse()?;
    }
    config.validate()?;
    Ok(config)
}

fn execute(cli: &Cli, config: &RunConfig) -> Result<CommandOutput> {
    match &cli.command {
        Command::Corpus { cmd } => match cmd {
            CorpusCmd::List => commands::corpus_list(),
            CorpusCmd::Export { form, out } => commands::corpus_export(config, form, out, None),
            CorpusCmd::Import { file } => commands::corpus_import(file),
        },
        Command::Compare { f1, f2, x } => commands::compare(config, f1, f2, *x),
        Command::DetectTwist {
            f1,
            f2,
            x,
            modulus_bound,
        } => commands::detect_twist_cmd(config, f1, f2, *x, *modulus_bound),
        Command::Density { form, x } => commands::density(config, form, *x),
        Command::Lfunc { cmd } => match cmd {
            LfuncCmd::Gamma { s, m } => commands::lfunc_gamma(s, *m),
            LfuncCmd::Lattice {
                alpha,
                p,
                n_min,
                n_max,
            } => commands::lfunc_lattice(alpha, *p, *n_min, *n_max),
            LfuncCmd::Shift {
                form,
                r,
                s,
                m,
                cutoff,
            } => commands::lfunc_shift(config, form, *r, s, *m, *cutoff),
            LfuncCmd::Obstruction { k1, k2, r, f1, f2 } => {
                commands::lfunc_obstruction(config, *k1, *k2, *r, f1.as_deref(), f2.as_deref())
            }
            LfuncCmd::Feq { form, s, terms } => commands::lfunc_feq(config, form, s, *terms),
        },
    }
}

fn emit(out: &CommandOutput, config: &RunConfig, dest: Option<&Path>) -> Result<()> {
    let rendered = match config.output_format {
        OutputFormat::Text => out.text.clone(),
        OutputFormat::Json => format!("{}\n", serde_json::to_string_pretty(&out.json)?),
        OutputFormat::Csv => match &out.csv {
            Some(csv) => csv.clone(),
            None => {
                return Err(Error::BadConfig(
                    "this command has no CSV rendering; use text or json".into(),
                ))
            }
        },
    };
    match dest {
        Some(path) => cache::atomic_write(path, rendered.as_bytes()),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn run_parsed(cli: &Cli) -> Result<i32> {
    let config = build_config(&cli.global)?;
    let out = execute(cli, &config)?;
    emit(&out, &config, cli.global.output.as_deref())?;
    Ok(out.exit_code)
}

/// Parse the process arguments, run the command, and return the exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let benign = matches!(
                err.kind(),
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion
            );
            let _ = err.print();
            return if benign { 0 } else { 1 };
        }
    };
    match run_parsed(&cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            2
        }
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    use std::sync::{Mutex, MutexGuard};

    // Tests that touch process-wide environment variables serialize on
    // this; the guard holds the lock for its whole scope.
    static ENV_LOCK: Mutex<()> = Mutex::new(());

    pub struct EnvGuard {
        key: &'static str,
        prior: Option<String>,
        _lock: MutexGuard<'static, ()>,
    }

    impl EnvGuard {
        pub fn set(key: &'static str, value: &str) -> Self {
            let lock = ENV_LOCK.lock().unwrap_or_else(|e| e.into_inner());
            let prior = std::env::var(key).ok();
            std::env::set_var(key, value);
            EnvGuard {
                key,
                prior,
                _lock: lock,
            }
        }
    }

    impl Drop for EnvGuard {
        fn drop(&mut self) {
            match &self.prior {
                Some(value) => std::env::set_var(self.key, value),
                None => std::env::remove_var(self.key),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::commands::parse_complex;
    use super::*;

    #[test]
    fn complex_argument_forms() {
        assert_eq!(parse_complex("2.5").unwrap(), num_complex::Complex64::new(2.5, 0.0));
        assert_eq!(
            parse_complex("-1, 0.75").unwrap(),
            num_complex::Complex64::new(-1.0, 0.75)
        );
        assert!(parse_complex("nope").is_err());
        assert!(parse_complex("1,2,3").is_err());
    }

    #[test]
    fn parse_tree_accepts_expected_shapes() {
        let cli = Cli::try_parse_from([
            "twistlab",
            "detect-twist",
            "--f1",
            "delta",
            "--f2",
            "1.12.delta",
            "--x",
            "500",
        ])
        .unwrap();
        match &cli.command {
            Command::DetectTwist { f1, x, .. } => {
                assert_eq!(f1, "delta");
                assert_eq!(*x, Some(500));
            }
            other => panic!("parsed {other:?}"),
        }

        let cli = Cli::try_parse_from([
            "twistlab", "lfunc", "lattice", "--alpha", "-2", "--p", "3", "--n-min", "-1",
        ])
        .unwrap();
        match &cli.command {
            Command::Lfunc {
                cmd: LfuncCmd::Lattice { alpha, n_min, n_max, .. },
            } => {
                assert_eq!(alpha, "-2");
                assert_eq!((*n_min, *n_max), (-1, 2));
            }
            other => panic!("parsed {other:?}"),
        }

        assert!(Cli::try_parse_from(["twistlab", "no-such-verb"]).is_err());
    }

    #[test]
    fn flag_overrides_beat_defaults() {
        let cli = Cli::try_parse_from([
            "twistlab",
            "--bound",
            "2000",
            "--weight-convention",
            "statement",
            "--tail-window",
            "5",
            "corpus",
            "list",
        ])
        .unwrap();
        let config = build_config(&cli.global).unwrap();
        assert_eq!(config.coefficient_bound, 2000);
        assert_eq!(
            config.weight_convention,
            crate::comparator::WeightConvention::Statement
        );
        assert_eq!(config.tail_window, 5);

        let cli = Cli::try_parse_from(["twistlab", "--format", "sideways", "corpus", "list"]).unwrap();
        assert!(build_config(&cli.global).is_err());
    }
}
