//! Front end of `paircorr`: argument handling, config files, CSV and JSON
//! artifacts. [`run`] returns the process exit code so tests can call it
//! in-process.

pub mod args;
pub mod commands;
pub mod config;
pub mod csv;

use std::ffi::OsString;

use clap::Parser;

use args::Cli;

/// Exit code of a rejected configuration.
pub const EXIT_VALIDATION: i32 = 1;
/// Exit code of a failure after validation (I/O, unreadable inputs, prime
/// bounds too small for the requested constants).
pub const EXIT_RUNTIME: i32 = 2;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] paircorr_core::Error),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {msg}")]
    Input { path: String, msg: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_VALIDATION,
            CliError::Core(paircorr_core::Error::BoundTooSmall { .. }) => EXIT_RUNTIME,
            CliError::Core(_) => EXIT_VALIDATION,
            CliError::Io { .. } | CliError::Input { .. } => EXIT_RUNTIME,
        }
    }
}

/// Parses `argv` (program name first), runs the command and returns the exit
/// code. Errors go to stderr.
pub fn run(argv: Vec<OsString>) -> i32 {
    let argv = match config::expand(argv) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match commands::dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
