//! Error type shared across the crate.

use thiserror::Error;

/// Errors produced by operator construction, mapping, simulation, and
/// optimization routines.
#[derive(Debug, Error)]
pub enum Error {
    /// Two objects that must act on the same register disagree on qubit count.
    #[error("qubit count mismatch: {left} vs {right}")]
    QubitMismatch { left: usize, right: usize },

    /// A dense-path request exceeds the supported size.
    #[error("size limit exceeded: {0}")]
    SizeLimit(String),

    /// A matrix that must be Hermitian (or symmetric) is not, within tolerance.
    #[error("matrix not Hermitian: largest deviation {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    /// The Jacobi eigensolver failed to reduce the off-diagonal mass.
    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal {off_diagonal:.3e})")]
    EigensolverStalled { sweeps: usize, off_diagonal: f64 },

    /// A text input (FCIDUMP, matrix file) could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// Structural validation failed (index ranges, orthonormality, weights...).
    #[error("validation error: {0}")]
    Validation(String),

    /// An I/O error while reading or writing an interchange file.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
