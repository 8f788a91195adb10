use std::path::PathBuf;

use thiserror::Error;

/// Failures surfaced by the command-line front end.
#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] zigzag_core::Error),

    #[error("{0}")]
    Usage(String),

    #[error("config {path}:{line}: {reason}")]
    Config { path: PathBuf, line: usize, reason: String },

    #[error("cannot write {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },

    #[error("cannot read {path}: {source}")]
    Input { path: PathBuf, source: std::io::Error },
}

impl CliError {
    /// 3 for numerical failures, 2 for everything the caller can fix.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) if e.is_numerical() => 3,
            _ => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
