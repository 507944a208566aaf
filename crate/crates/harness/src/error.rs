//! Harness-level errors mapped onto process exit codes.

use thiserror::Error;

/// Errors surfaced by the experiment layer.
#[derive(Debug, Error)]
pub enum HarnessError {
    /// Bad configuration, unreadable inputs, malformed files (exit code 2).
    #[error("configuration error: {0}")]
    Config(String),
    /// Numerical failures: eigensolver stalls, undefined statistics,
    /// non-finite costs (exit code 3).
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, HarnessError>;

impl HarnessError {
    /// Process exit code for this error class.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 2,
            HarnessError::Numerical(_) => 3,
        }
    }
}

impl From<evqe_core::Error> for HarnessError {
    fn from(err: evqe_core::Error) -> Self {
        match err {
            evqe_core::Error::NotHermitian { .. } | evqe_core::Error::EigensolverStalled { .. } => {
                HarnessError::Numerical(err.to_string())
            }
            other => HarnessError::Config(other.to_string()),
        }
    }
}

impl From<std::io::Error> for HarnessError {
    fn from(err: std::io::Error) -> Self {
        HarnessError::Config(err.to_string())
    }
}

impl From<serde_json::Error> for HarnessError {
    fn from(err: serde_json::Error) -> Self {
        HarnessError::Config(err.to_string())
    }
}

impl From<csv::Error> for HarnessError {
    fn from(err: csv::Error) -> Self {
        HarnessError::Config(err.to_string())
    }
}
