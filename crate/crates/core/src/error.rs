use thiserror::Error;

/// Errors shared by every module of the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// The input encodes a divergent value or violates an admissibility condition.
    #[error("domain error: {0}")]
    Domain(String),
    /// Text could not be parsed; `pos` is a byte offset into the source.
    #[error("parse error at {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    /// Arity or signature validation failed after a successful parse.
    #[error("validation error: {0}")]
    Validation(String),
    /// An identity failed its numeric check.
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("io error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
