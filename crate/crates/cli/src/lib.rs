//! Command-line front end: flag parsing, dispatch to the `clockshift`
//! operations, and rendering of reproducible CSV/JSON artifacts.

mod artifact;
mod commands;
mod config;
mod signal_io;

use std::fmt;
use std::path::Path;

pub use artifact::{Assertion, Body, Report};
pub use config::{Cli, Command, Format, RunConfig};
pub use signal_io::{parse_csv, parse_json, read_signal};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad flags, bad input files or a violated precondition.
    Usage(String),
    /// An internal consistency check failed before a report existed.
    Assertion(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Assertion(_) => EXIT_ASSERTION,
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "error: {m}"),
            CliError::Assertion(m) => write!(f, "assertion failed: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<clockshift::Error> for CliError {
    fn from(e: clockshift::Error) -> Self {
        match e {
            clockshift::Error::Inconsistent { .. } => CliError::Assertion(e.to_string()),
            other => CliError::Usage(other.to_string()),
        }
    }
}

/// A finished run: the rendered artifact and the exit status it implies.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub artifact: String,
    pub report: Report,
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        if self.report.failures().is_empty() {
            EXIT_OK
        } else {
            EXIT_ASSERTION
        }
    }
}

/// Runs `config` and renders its artifact without writing it anywhere.
pub fn run(config: &RunConfig) -> Result<Outcome, CliError> {
    config.validate()?;
    let report = commands::dispatch(config)?;
    let artifact = artifact::render(config, &report)?;
    Ok(Outcome { artifact, report })
}

/// Runs `config`, writes the artifact to `config.output` (or stdout) and
/// returns the process exit status.
pub fn execute(config: &RunConfig) -> i32 {
    let outcome = match run(config) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("{e}");
            if e.exit_code() == EXIT_USAGE {
                eprintln!("run `clockshift --help` for usage");
            }
            return e.exit_code();
        }
    };
    let written = match &config.output {
        Some(path) => write_file(path, &outcome.artifact),
        None => {
            print!("{}", outcome.artifact);
            Ok(())
        }
    };
    if let Err(e) = written {
        eprintln!("{e}");
        return e.exit_code();
    }
    for failure in outcome.report.failures() {
        eprintln!("assertion failed: {} ({})", failure.name, failure.detail);
    }
    outcome.exit_code()
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
