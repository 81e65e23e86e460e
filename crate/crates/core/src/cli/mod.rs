//! The `robin-forge` command set.
//!
//! Every command drives the generator for a number of steps and writes one
//! table row per step (or per checkpoint, for diagnostics). CSV output starts
//! with the line `# robin-forge v1 schema` followed by the column names;
//! every decimal column is followed by a `_pm` column holding an upper bound
//! on the truncation and interval error. JSONL rows carry the same fields.

mod commands;
mod session;
mod table;

pub use commands::{
    cmd_diagnostics, cmd_generate, cmd_oracle, cmd_verify, generated_up_to, Outcome,
};
pub use table::{Format, SCHEMA_LINE};

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ca::EngineError;
use crate::metrics::{MetricsError, DEFAULT_EXACT_BOUND};
use crate::numeric::{DEFAULT_PRECISION, DEFAULT_PRECISION_CAP};
use crate::oracle::{OracleError, MAX_ORACLE_BOUND};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VIOLATES: i32 = 2;
pub const EXIT_UNDECIDED: i32 = 3;
pub const EXIT_ORACLE_MISMATCH: i32 = 4;

/// Environment variable overriding the default working precision.
pub const PRECISION_ENV: &str = "ROBIN_FORGE_PRECISION";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("checkpoint error: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
pub enum Diagnostic {
    Lemma1,
    Lemma2,
    Lemma3,
    Aek7,
    Growth,
}

impl Diagnostic {
    pub fn as_str(&self) -> &'static str {
        match self {
            Diagnostic::Lemma1 => "lemma1",
            Diagnostic::Lemma2 => "lemma2",
            Diagnostic::Lemma3 => "lemma3",
            Diagnostic::Aek7 => "aek7",
            Diagnostic::Growth => "growth",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub steps: u64,
    pub precision_bits: u32,
    pub precision_cap_bits: u32,
    pub band_b: f64,
    pub band_c: f64,
    pub exact_mode_bound: u64,
    pub output_path: Option<PathBuf>,
    pub output_format: Format,
    pub checkpoint_every: u64,
    pub checkpoint_path: Option<PathBuf>,
    pub resume_path: Option<PathBuf>,
    pub diagnostic: Diagnostic,
    pub oracle_bound: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            steps: 10_000,
            precision_bits: DEFAULT_PRECISION,
            precision_cap_bits: DEFAULT_PRECISION_CAP,
            band_b: 0.25,
            band_c: 1.0,
            exact_mode_bound: DEFAULT_EXACT_BOUND,
            output_path: None,
            output_format: Format::Csv,
            checkpoint_every: 1000,
            checkpoint_path: None,
            resume_path: None,
            diagnostic: Diagnostic::Lemma1,
            oracle_bound: 10_000_000,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let fail = |m: String| Err(CliError::Config(m));
        if self.steps == 0 {
            return fail("steps must be at least 1".into());
        }
        if !(self.band_b > 0.0 && self.band_b < 0.5) {
            return fail(format!("b = {} is outside (0, 1/2)", self.band_b));
        }
        if !(self.band_c > 0.0 && self.band_c.is_finite()) {
            return fail(format!("c = {} must be positive", self.band_c));
        }
        if self.precision_bits < 53 {
            return fail(format!(
                "precision {} is below 53 bits",
                self.precision_bits
            ));
        }
        if self.precision_bits > self.precision_cap_bits {
            return fail(format!(
                "precision {} exceeds the cap {}",
                self.precision_bits, self.precision_cap_bits
            ));
        }
        if self.checkpoint_every == 0 {
            return fail("checkpoint interval must be at least 1".into());
        }
        if self.oracle_bound < 2 || self.oracle_bound > MAX_ORACLE_BOUND {
            return fail(format!(
                "oracle bound {} is outside 2..={MAX_ORACLE_BOUND}",
                self.oracle_bound
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "robin-forge",
    version,
    about = "Colossally abundant numbers and Robin's inequality"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write one row per step: quotient, log10 n, log log n, ε.
    Generate(Flags),
    /// Certified Robin verdicts, band margins and ratio-law checks.
    Verify(Flags),
    /// One diagnostic series at log-spaced checkpoints.
    Diagnostics {
        #[arg(long, value_enum, default_value = "lemma1")]
        which: Diagnostic,
        #[command(flatten)]
        flags: Flags,
    },
    /// Brute-force lists and comparison with the generator.
    Oracle {
        #[arg(long, default_value_t = 10_000_000)]
        bound: u64,
        #[command(flatten)]
        flags: Flags,
    },
}

#[derive(Debug, clap::Args)]
struct Flags {
    #[arg(long, default_value_t = 10_000)]
    steps: u64,
    #[arg(long, env = PRECISION_ENV, default_value_t = DEFAULT_PRECISION)]
    precision_bits: u32,
    #[arg(long, default_value_t = DEFAULT_PRECISION_CAP)]
    precision_cap: u32,
    #[arg(long, default_value_t = 0.25)]
    b: f64,
    #[arg(long, default_value_t = 1.0)]
    c: f64,
    #[arg(long, default_value_t = DEFAULT_EXACT_BOUND)]
    exact_bound: u64,
    #[arg(long, value_enum, default_value = "csv")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    checkpoint: Option<PathBuf>,
    #[arg(long, default_value_t = 1000)]
    checkpoint_every: u64,
    #[arg(long)]
    resume: Option<PathBuf>,
}

impl Flags {
    fn into_config(self) -> RunConfig {
        RunConfig {
            steps: self.steps,
            precision_bits: self.precision_bits,
            precision_cap_bits: self.precision_cap,
            band_b: self.b,
            band_c: self.c,
            exact_mode_bound: self.exact_bound,
            output_path: self.out,
            output_format: self.format,
            checkpoint_every: self.checkpoint_every,
            checkpoint_path: self.checkpoint,
            resume_path: self.resume,
            ..RunConfig::default()
        }
    }
}

/// Parse arguments, run the command, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Generate(flags) => cmd_generate(&flags.into_config()),
        Command::Verify(flags) => cmd_verify(&flags.into_config()),
        Command::Diagnostics { which, flags } => {
            let config = RunConfig {
                diagnostic: which,
                ..flags.into_config()
            };
            cmd_diagnostics(&config)
        }
        Command::Oracle { bound, flags } => {
            let config = RunConfig {
                oracle_bound: bound,
                ..flags.into_config()
            };
            cmd_oracle(&config)
        }
    };
    match result {
        Ok(outcome) => {
            if let Outcome::OracleMismatch { index } = outcome {
                eprintln!("oracle mismatch at index {index}");
            }
            outcome.exit_code()
        }
        Err(e) => {
            eprintln!("robin-forge: {e}");
            EXIT_USAGE
        }
    }
}
