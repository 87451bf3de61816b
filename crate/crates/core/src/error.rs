use thiserror::Error;

/// Errors raised by the analysis routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("coordinate {i} out of range 1..={n}")]
    CoordinateOutOfRange { i: usize, n: usize },

    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },

    #[error("arity {n} exceeds the exact-table cap of {cap}")]
    CapExceeded { n: usize, cap: usize },

    #[error("bias p = {p} outside {range}")]
    Domain { p: f64, range: &'static str },

    #[error("majority needs an odd number of inputs, got {0}")]
    EvenMajority(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("conditioning on the null event {{f = 1}}")]
    NullConditioning,

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("malformed truth table: {0}")]
    TableFormat(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
