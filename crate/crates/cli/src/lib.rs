//! Front end for the `zmw` binary: configuration parsing and the spectrum,
//! sweep and fit runs behind each subcommand.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod run;

use std::path::Path;

use thiserror::Error;

pub use config::RunConfig;

/// Process exit code for usage and configuration errors.
pub const EXIT_USAGE: i32 = 2;
/// Process exit code for numerical failures.
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("config line {line}: {message}")]
    Config { line: usize, message: String },

    /// Malformed input data, e.g. a bad row in a spectrum CSV.
    #[error("{path}: line {line}: {message}")]
    Data { path: String, line: usize, message: String },

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    /// Valid input that the models reject (for instance a zero linewidth).
    #[error("invalid parameters: {0}")]
    Invalid(zmw_core::Error),

    #[error("numerical failure: {0}")]
    Numerical(zmw_core::Error),
}

impl CliError {
    pub(crate) fn config(line: usize, message: impl Into<String>) -> Self {
        CliError::Config {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn missing(key: &str) -> Self {
        CliError::Usage(format!("missing required key '{key}'"))
    }

    pub(crate) fn io(path: &Path, err: &std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            message: err.to_string(),
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => EXIT_NUMERICAL,
            _ => EXIT_USAGE,
        }
    }
}
