use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("period must be at least 1")]
    ZeroPeriod,
    #[error("invalid parameters: {0}")]
    InvalidParams(&'static str),
    #[error("series too short: need at least {needed} values, got {got}")]
    TooShort { needed: usize, got: usize },
    #[error("series is empty")]
    EmptySeries,
    #[error("dates not strictly increasing at bar {0}")]
    NonMonotonicDates(usize),
    #[error("bar {0} violates price invariants")]
    InvariantViolation(usize),
    #[error("signal at bar {index} is outside a series of {len} bars")]
    IndexOutOfRange { index: usize, len: usize },
    #[error(
        "signals must be strictly increasing and alternate Buy/Sell starting with Buy (event {0})"
    )]
    NonAlternatingSignals(usize),
    #[error("non-positive price at position {0}")]
    NonPositivePrice(usize),
    #[error("standard deviation is zero")]
    ZeroVolatility,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("argument outside the function domain: {0}")]
    DomainError(&'static str),
}

impl Error {
    /// Stable variant name, for machine-readable error reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ZeroPeriod => "ZeroPeriod",
            Error::InvalidParams(_) => "InvalidParams",
            Error::TooShort { .. } => "TooShort",
            Error::EmptySeries => "EmptySeries",
            Error::NonMonotonicDates(_) => "NonMonotonicDates",
            Error::InvariantViolation(_) => "InvariantViolation",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::NonAlternatingSignals(_) => "NonAlternatingSignals",
            Error::NonPositivePrice(_) => "NonPositivePrice",
            Error::ZeroVolatility => "ZeroVolatility",
            Error::LengthMismatch { .. } => "LengthMismatch",
            Error::DomainError(_) => "DomainError",
        }
    }
}
