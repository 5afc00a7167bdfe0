use thiserror::Error;

/// Errors produced by the spectral routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed or out-of-range input.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A hypothesis required by the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A root could not be refined or verified.
    #[error("root at lambda = {lambda} failed verification: {reason}")]
    Unconverged { lambda: f64, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
