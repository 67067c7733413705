use thiserror::Error;

use crate::treedec::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),
    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(Violation),
    #[error("{what} is {got}, above the cap of {cap}{hint}")]
    CapExceeded {
        what: String,
        got: usize,
        cap: usize,
        hint: String,
    },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parse error (line {line}): {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),
    #[error("symmetry violation: {0}")]
    Symmetry(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("calibration failed: {0}")]
    Calibration(String),
}

impl Error {
    pub fn cap(what: impl Into<String>, got: usize, cap: usize) -> Self {
        Error::CapExceeded {
            what: what.into(),
            got,
            cap,
            hint: String::new(),
        }
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
