use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    /// The denominator of the map vanishes at the given point (canonical literal).
    #[error("pole at {0}")]
    Pole(String),

    #[error("comparison could not be certified at {precision_bits} bits: {what}")]
    IndeterminateComparison { what: String, precision_bits: u32 },

    #[error("p-adic data must be rational: {0}")]
    NonRationalData(String),

    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),

    #[error("no cyclotomic solution: {0}")]
    NotRepresentable(String),

    #[error("exponent 1 - d + e vanishes, monic conjugation undefined")]
    ExponentZero,

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
