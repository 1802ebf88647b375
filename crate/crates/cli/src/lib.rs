//! Experiment runner behind the `gradstep` binary.
//!
//! - [`config`]: `key=value` experiment specs, flag overrides and the
//!   per-problem-set `(τ₁, γ)` presets.
//! - [`experiment`]: runs a spec in parallel and writes raw and aggregate
//!   CSV tables.
//! - [`profile`]: Dolan–Moré performance profiles from a raw run table.

pub mod config;
pub mod experiment;
pub mod profile;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or inconsistent experiment specification.
    #[error("invalid specification: {0}")]
    Spec(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("worker pool: {0}")]
    Pool(String),
}

impl CliError {
    /// Process exit code: 2 for specification errors, 3 for runtime failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec(_) | CliError::InvalidInput(_) => 2,
            _ => 3,
        }
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
