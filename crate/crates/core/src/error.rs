use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} = {value} is out of range (admissible: {range})")]
    OutOfRange {
        what: &'static str,
        value: i64,
        range: String,
    },

    #[error("format error at row {row}: {msg}")]
    Format { row: usize, msg: String },

    #[error("A = {a_exp} outside admissible interval {interval}")]
    Domain { a_exp: f64, interval: &'static str },

    #[error("exponent fit failed: {0}")]
    Fit(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn out_of_range(what: &'static str, value: i64, range: impl Into<String>) -> Error {
    Error::OutOfRange {
        what,
        value,
        range: range.into(),
    }
}
