use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("precision exhausted in {stage} at {bits} bits")]
    PrecisionExhausted { stage: String, bits: u32 },
    #[error("division by an interval containing zero")]
    DivisionByZero,
    #[error("domain error: {0}")]
    Domain(String),
    #[error("root isolation failed: {0}")]
    RootIsolation(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("continued fraction too short: no convergent denominator exceeds {threshold}")]
    NotReached { threshold: String },
    #[error("reduction failed for {label}: {reason}")]
    Reduction { label: String, reason: String },
    #[error("theorem check failed: {0}")]
    Mismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
