//! Crate-wide error type.

use std::path::PathBuf;

/// Errors produced by image operations, solvers, metrics, and corpus loading.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// A caller-supplied argument violates a precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A numeric routine failed (non-finite input, factorization breakdown).
    #[error("numeric error: {0}")]
    Numeric(String),

    /// Forward/backward state misuse (e.g. backward without recorded forward).
    #[error("state error: {0}")]
    State(String),

    /// A corpus file could not be read or decoded.
    #[error("load error at {path}: {reason}")]
    Load { path: PathBuf, reason: String },

    /// The synthetic generator could not satisfy the requested configuration.
    #[error("generation error: {0}")]
    Generation(String),

    /// File I/O failure outside corpus loading.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
