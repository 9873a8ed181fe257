//! Errors surfaced by the command-line front end.

use thiserror::Error;

/// Everything that can stop a run.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or inconsistent configuration (exit code 2).
    #[error("configuration error: {0}")]
    Config(String),
    /// File system failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    /// Malformed CSV content.
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    /// A data file parsed but does not describe a valid lattice.
    #[error("format error: {0}")]
    Format(String),
    /// JSON serialisation failure.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
    /// A library operation failed.
    #[error(transparent)]
    Core(#[from] li_core::Error),
}

impl CliError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            _ => 1,
        }
    }

    /// Short machine-readable category.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Io(_) => "io",
            CliError::Csv(_) | CliError::Format(_) => "format",
            CliError::Json(_) => "json",
            CliError::Core(_) => "core",
        }
    }
}

/// Result alias for the front end.
pub type Result<T> = std::result::Result<T, CliError>;
