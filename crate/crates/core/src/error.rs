use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("argument {value} outside supported range: {reason}")]
    Range { value: f64, reason: &'static str },

    #[error("zero pivot at row {row} (|pivot| = {pivot:e})")]
    Singular { row: usize, pivot: f64 },

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("tension p = 0 requires the cubic-limit basis mode")]
    ZeroTension,

    #[error("problem has no exact solution")]
    MissingExact,

    #[error("time level {0} is not stored")]
    MissingLevel(usize),

    #[error("unknown benchmark id {0} (expected 1..=5)")]
    UnknownBenchmark(u8),

    #[error("need at least {needed} data points, got {got}")]
    TooFewPoints { needed: usize, got: usize },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
