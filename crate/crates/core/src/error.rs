use thiserror::Error;

use crate::arith::CohPoly;

/// Errors raised by the engines and the command-line front end.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("size limit exceeded: {0}")]
    Budget(String),
    #[error("route mismatch for {query}: {left_name} gave {left}, {right_name} gave {right}")]
    RouteMismatch {
        query: String,
        left_name: String,
        left: CohPoly,
        right_name: String,
        right: CohPoly,
    },
    #[error("internal consistency check failed: {0}")]
    Internal(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
