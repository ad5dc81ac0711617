//! Command-line drivers for `pftl-core`.
//!
//! The binary is a thin wrapper around [`run`]. Exit codes: 0 on success, 2 for
//! configuration and argument errors, 3 when a resource limit is hit, 4 when a
//! certified computation cannot reach the accuracy a decision needs.

pub mod commands;
pub mod config;
pub mod report;
pub mod runner;

use std::ffi::OsString;
use std::fmt;
use std::io::Write;

use clap::Parser;

pub use config::{Cli, ExperimentConfig, Format, Task};
pub use runner::ThreadRunner;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_RIGOR: i32 = 4;

/// Every way a run can fail.
#[derive(Debug)]
pub enum Failure {
    Config(String),
    Core(pftl_core::Error),
    Io(String),
}

impl From<pftl_core::Error> for Failure {
    fn from(e: pftl_core::Error) -> Self {
        Failure::Core(e)
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "configuration error: {m}"),
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(m) => write!(f, "output error: {m}"),
        }
    }
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Core(pftl_core::Error::Resource { .. }) => EXIT_RESOURCE,
            Failure::Core(pftl_core::Error::Refinement { .. }) => EXIT_RIGOR,
            Failure::Core(_) | Failure::Config(_) | Failure::Io(_) => EXIT_CONFIG,
        }
    }
}

/// Validates, executes and writes the output. Returns the encoded output.
pub fn run_config(cfg: &ExperimentConfig) -> Result<(String, Option<String>), Failure> {
    let rendered = commands::execute(cfg)?;
    let body = rendered.encode(cfg.format)?;
    match &cfg.out {
        Some(path) => std::fs::write(path, &body).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?,
        None => std::io::stdout().write_all(body.as_bytes()).map_err(|e| Failure::Io(e.to_string()))?,
    }
    Ok((body, rendered.summary))
}

/// Entry point shared by the binary and the tests. Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    let outcome = cli.validate().and_then(|cfg| run_config(&cfg));
    match outcome {
        Ok((_, summary)) => {
            if let Some(s) = summary {
                eprintln!("{s}");
            }
            EXIT_OK
        }
        Err(e) => {
            eprintln!("pftl: {e}");
            e.exit_code()
        }
    }
}
