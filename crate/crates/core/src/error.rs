//! Error type shared by every module of the crate.

use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain where an operation is defined.
    #[error("domain error: {0}")]
    Domain(String),
    /// A function was evaluated at a singular point.
    #[error("singular point: {0}")]
    Singular(String),
    /// Inconsistent problem or experiment configuration.
    #[error("configuration error: {0}")]
    Config(String),
    /// Two objects that must have the same size do not.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    /// Numerical breakdown of the Krylov solver.
    #[error("GMRES breakdown at iteration {0}")]
    Breakdown(usize),
    /// Filesystem or serialization failure.
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::Dimension { expected, got })
    }
}
