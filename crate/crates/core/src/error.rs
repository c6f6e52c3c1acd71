use thiserror::Error;

/// Errors raised by library operations.
///
/// Mathematical failures (a product that is not `f·I`, a square that does
/// not commute) are reported as verdicts inside certificates, not as errors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or mismatched input: shapes, rings, indices.
    #[error("usage error: {0}")]
    Usage(String),
    /// A mathematical precondition of the operation does not hold.
    #[error("domain error: {0}")]
    Domain(String),
    /// Text input could not be parsed.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
