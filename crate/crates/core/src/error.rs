use thiserror::Error;

/// Errors produced by box construction, decomposition and the numeric solvers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid bit value {0}, expected 0 or 1")]
    InvalidBit(u8),

    #[error("invalid box: {0}")]
    InvalidBox(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("box is signaling: {0}")]
    Signaling(String),

    #[error("box is not of Hardy form: {0}")]
    NotHardyForm(String),

    #[error("linear program did not converge after {0} pivots")]
    LpNotConverged(usize),

    #[error("randomness case {0} has no member with c6 > 0")]
    EmptyFamily(u8),

    #[error("unknown randomness case {0}, expected 1..=15")]
    UnknownCase(u8),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
