use thiserror::Error;

use crate::schedule::OpKind;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("job {job}: {field} must be a finite non-negative number, got {value}")]
    InvalidJob {
        job: usize,
        field: &'static str,
        value: f64,
    },

    #[error("malformed schedule: {0}")]
    Structure(String),

    #[error("schedule does not match instance: {0}")]
    Mismatch(String),

    #[error("processing time of job {job} queried before its test completed")]
    Unrevealed { job: usize },

    #[error("policy chose {kind:?} of job {job}, which is not available")]
    IllegalChoice { job: usize, kind: OpKind },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("instance file line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
