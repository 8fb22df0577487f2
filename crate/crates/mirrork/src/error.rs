//! Crate-wide error type, aligned with the CLI exit-code contract.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input data (exit code 2).
    #[error("{0}")]
    Validation(String),

    /// Input is structurally fine but beyond a supported size or rank cap
    /// (exit code 3).
    #[error("{0}")]
    Unsupported(String),

    /// Two independent computations of the same quantity disagree
    /// (exit code 4; always a bug).
    #[error("{0}")]
    CrossCheck(String),

    /// An internal invariant failed (also exit code 4).
    #[error("{0}")]
    Internal(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn unsupported(msg: impl Into<String>) -> Self {
        Error::Unsupported(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }

    /// Process exit code for the CLI contract.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Validation(_) | Error::Json(_) | Error::Io(_) => 2,
            Error::Unsupported(_) => 3,
            Error::CrossCheck(_) | Error::Internal(_) => 4,
        }
    }

    /// Short machine-parsable tag for the diagnostic stream.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::Validation(_) => "validation",
            Error::Unsupported(_) => "unsupported",
            Error::CrossCheck(_) => "cross-check",
            Error::Internal(_) => "internal",
            Error::Io(_) => "io",
            Error::Json(_) => "json",
        }
    }
}
