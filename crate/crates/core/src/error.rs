use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument fell outside the domain the operation is defined on.
    #[error("domain error: {0}")]
    Domain(String),

    /// The instance exceeds the size an exact procedure is allowed to handle.
    #[error("size limit: {what} supports n <= {limit}, got n = {n}")]
    SizeLimit {
        what: &'static str,
        limit: usize,
        n: usize,
    },

    /// Every trial of a Monte Carlo batch ran out of budget, so no rate exists.
    #[error("undefined rate: all {trials} trials exhausted their search budget")]
    UndefinedRate { trials: usize },

    /// Malformed graph text.
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
