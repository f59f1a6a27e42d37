//! Experiment harness for the parametric receiver.
//!
//! [`config`] resolves an [`config::ExperimentSpec`] from built-in defaults,
//! an optional flat TOML file, and command-line overrides; [`run`] executes
//! the two experiment kinds (single-trial traces and Monte Carlo SER-vs-SNR
//! sweeps) and writes their CSV outputs.

pub mod config;
pub mod run;

/// Error split that maps onto process exit codes: usage errors exit 1,
/// runtime/IO errors exit 2.
#[derive(Debug)]
pub enum AppError {
    Usage(String),
    Runtime(anyhow::Error),
}

impl std::fmt::Display for AppError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            AppError::Usage(msg) => write!(f, "{msg}"),
            AppError::Runtime(err) => write!(f, "{err:#}"),
        }
    }
}

impl std::error::Error for AppError {}

impl From<anyhow::Error> for AppError {
    fn from(err: anyhow::Error) -> Self {
        AppError::Runtime(err)
    }
}

impl From<std::io::Error> for AppError {
    fn from(err: std::io::Error) -> Self {
        AppError::Runtime(err.into())
    }
}
