//! `tempwork` command-line frontend.
//!
//! Every subcommand writes one JSON result document (or a CSV table) to
//! standard output. Exit codes: 0 success, 2 argument error, 3 failed
//! numerical validation.

use std::ffi::OsString;
use std::io::Write;

use clap::{Args, Parser, Subcommand};

pub mod args;
mod commands;
pub mod document;
pub mod selftest;

pub use document::{ResultDocument, Table};

use args::Common;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_VALIDATION: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
}

impl From<tempwork::Error> for CliError {
    fn from(e: tempwork::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
        }
    }
}

/// A finished document plus the reason a requested validation failed, if it did.
pub struct Outcome {
    pub doc: ResultDocument,
    pub failure: Option<String>,
}

impl From<ResultDocument> for Outcome {
    fn from(doc: ResultDocument) -> Self {
        Outcome { doc, failure: None }
    }
}

#[derive(Parser, Debug)]
#[command(name = "tempwork", version, about = "Two-point-measurement work statistics and temporal CHSH tests for a qubit")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Analytic Jarzynski average <e^{beta(W + dF)}> (checked against 1)
    Jarzynski(Common),
    /// Work moments <W^k> for k = 1..order
    Moments(Common),
    /// Joint outcome table and merged work distribution
    WorkDist(Common),
    /// Temporal CHSH value for four measurement axes
    Chsh(Common),
    /// Three-setting temporal Bell inequality
    Bell3(Common),
    /// CHSH-signed combination of work moments
    WorkBell(Common),
    /// Classical and quantum ranges of the work combination
    ClassicalBounds(Common),
    /// Multi-start maximization of the CHSH value or the work combination
    Optimize(Common),
    /// Forward/backward probability ratios against the Crooks prediction
    Crooks(Common),
    /// Monte Carlo estimates from sampled trajectories
    Sample(Common),
    /// One-parameter scan producing a table
    Scan(Common),
    /// Runs the built-in invariant suites
    Selftest(SelftestArgs),
}

#[derive(Args, Debug, Clone)]
pub struct SelftestArgs {
    /// Replaces every suite tolerance (test hook)
    #[arg(long, hide = true, allow_hyphen_values = true)]
    pub tolerance_override: Option<f64>,
}

/// Parses `argv` (including the program name) and runs one subcommand.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = err.write_all(text.as_bytes());
                EXIT_USAGE
            } else {
                let _ = out.write_all(text.as_bytes());
                EXIT_OK
            };
        }
    };
    let (result, format) = match &cli.command {
        Command::Selftest(a) => return selftest::run(a.tolerance_override, out, err),
        Command::Jarzynski(c) => (commands::jarzynski(c), c.format),
        Command::Moments(c) => (commands::moments(c), c.format),
        Command::WorkDist(c) => (commands::work_dist(c), c.format),
        Command::Chsh(c) => (commands::chsh(c), c.format),
        Command::Bell3(c) => (commands::bell3(c), c.format),
        Command::WorkBell(c) => (commands::work_bell(c), c.format),
        Command::ClassicalBounds(c) => (commands::classical_bounds(c), c.format),
        Command::Optimize(c) => (commands::optimize(c), c.format),
        Command::Crooks(c) => (commands::crooks(c), c.format),
        Command::Sample(c) => (commands::sample(c), c.format),
        Command::Scan(c) => (commands::scan(c), c.format),
    };
    let outcome = match result {
        Ok(o) => o,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    if let Err(e) = document::emit(&outcome.doc, format, out) {
        let _ = writeln!(err, "error: {e}");
        return EXIT_USAGE;
    }
    match outcome.failure {
        Some(reason) => {
            let _ = writeln!(err, "validation failed: {reason}");
            EXIT_VALIDATION
        }
        None => EXIT_OK,
    }
}
