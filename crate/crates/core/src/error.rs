use thiserror::Error;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Invalid configuration: bad sieve limit, tolerance, empty grid, unknown check id.
    #[error("configuration error: {0}")]
    Config(String),
    /// Argument outside the range covered by the tables it needs.
    #[error("range error: {0}")]
    Range(String),
    /// Argument outside the mathematical domain of the function.
    #[error("domain error: {0}")]
    Domain(String),
    /// A truncation bound could not be brought under the requested tolerance.
    #[error("precision error: {0}")]
    Precision(String),
    /// External data (the zeros table) is malformed or fails validation.
    #[error("data error: {0}")]
    Data(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn range(msg: impl Into<String>) -> Error {
    Error::Range(msg.into())
}

pub(crate) fn precision(msg: impl Into<String>) -> Error {
    Error::Precision(msg.into())
}

pub(crate) fn config(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}
