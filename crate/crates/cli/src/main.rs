//! `hyperseed`: construct, verify, iterate and export certified constructions.
//!
//! Exit codes: 0 passing, 1 failing certificate or other checked failure,
//! 2 search exhausted, 3 precision exhausted, 4 I/O, 5 corrupt state,
//! 6 dimension exceeds depth, 64 usage.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hyperseed::exactcircle::Angle;
use hyperseed::Error;

pub const EXIT_FAILING: u8 = 1;
pub const EXIT_SEARCH: u8 = 2;
pub const EXIT_PRECISION: u8 = 3;
pub const EXIT_IO: u8 = 4;
pub const EXIT_CORRUPT: u8 = 5;
pub const EXIT_DIM: u8 = 6;
pub const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "hyperseed",
    version,
    about = "Certified construction of a hypercyclic rank-one perturbation of a unitary diagonal operator"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build a state of the given depth and certify it.
    Construct(ConstructArgs),
    /// Re-run the certificate suite on a stored state.
    Verify(VerifyArgs),
    /// Iterate a finite section on a start vector and write a CSV trace.
    Orbit(OrbitArgs),
    /// Write a view of a stored state.
    Export(ExportArgs),
}

#[derive(Args, Debug)]
struct ConstructArgs {
    #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u32).range(1..))]
    depth: u32,
    #[arg(long = "precision-bits", default_value_t = 4096)]
    precision_bits: u32,
    #[arg(long = "precision-ceiling", env = "HYPERSEED_PRECISION_CEILING", default_value_t = 1 << 20)]
    precision_ceiling: u32,
    /// Seed angle `p/2^q` (or `p/D`, D a power of two).
    #[arg(long = "mu1-angle", default_value = "1/64")]
    mu1_angle: Angle,
    #[arg(long)]
    out: PathBuf,
    /// Also write the certificate here.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Write the certificate here.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Evaluate at this precision instead of the state's working precision.
    #[arg(long = "precision-bits")]
    precision_bits: Option<u32>,
    /// Undecided checks are retried at doubled precision up to this ceiling.
    #[arg(long = "precision-ceiling", env = "HYPERSEED_PRECISION_CEILING")]
    precision_ceiling: Option<u32>,
}

#[derive(Args, Debug, Clone)]
struct OrbitOptions {
    /// Section dimension; defaults to the state depth.
    #[arg(long)]
    dim: Option<usize>,
    #[arg(long, default_value_t = 100)]
    steps: usize,
    /// `e<k>`, `u<k>`, `ones` or `random:<seed>`.
    #[arg(long, default_value = "e1")]
    start: String,
    /// JSON array of target vectors, each an array of `[re, im]` pairs.
    #[arg(long)]
    targets: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OrbitArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[command(flatten)]
    orbit: OrbitOptions,
    /// CSV destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum What {
    State,
    Certificate,
    Eigenvectors,
    Operator,
    Trace,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct ExportArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, value_enum)]
    what: What,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Destination; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    #[command(flatten)]
    orbit: OrbitOptions,
}

/// A command outcome: an exit code plus an optional message for standard error.
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Failure { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::SearchExhausted { .. } => EXIT_SEARCH,
            Error::PrecisionExhausted { .. } => EXIT_PRECISION,
            Error::Io(_) => EXIT_IO,
            Error::CorruptState(_) | Error::Json(_) => EXIT_CORRUPT,
            Error::DepthExceeded { .. } => EXIT_DIM,
            Error::InvalidArgument(_) | Error::BadSeed(_) => EXIT_USAGE,
            _ => EXIT_FAILING,
        };
        Failure::new(code, e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    let result = match cli.command {
        Command::Construct(a) => commands::construct(a),
        Command::Verify(a) => commands::verify(a),
        Command::Orbit(a) => commands::orbit(a),
        Command::Export(a) => commands::export(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            if !f.message.is_empty() {
                eprintln!("hyperseed: {}", f.message);
            }
            ExitCode::from(f.code)
        }
    }
}
