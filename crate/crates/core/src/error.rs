use crate::compatibility::Incompatibility;
use crate::rational::Rational;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("argument outside the function's domain: {0}")]
    Domain(String),

    #[error("point {0} does not belong to the set")]
    NotInSet(Rational),

    #[error("piecewise-linear map is not increasing (slope {0} on some piece)")]
    NotIncreasing(Rational),

    #[error("a compact set needs at least one interval")]
    EmptySet,

    #[error("total measure is zero")]
    ZeroMeasure,

    #[error("malformed interval [{0}, {1}]: left endpoint exceeds right")]
    MalformedInterval(Rational, Rational),

    #[error("degenerate generator parameters: {0}")]
    DegenerateParameters(String),

    #[error("sampled function is not constant on the fiber at level {level}")]
    NotFiberConstant { level: Rational },

    #[error("step function lives on a different set than the descriptor expects")]
    DomainMismatch,

    #[error("invalid isometry descriptor: {0}")]
    InvalidDescriptor(String),

    #[error("transformer is not a representable isometry: {0}")]
    NotAnIsometry(String),

    #[error("psi is not a valid increasing lipeomorphism between the measure intervals: {0}")]
    InvalidPsi(String),

    #[error("{0}")]
    FiberIncompatible(Incompatibility),

    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),

    #[error("endpoints out of order: {0} >= {1}")]
    BadOrder(Rational, Rational),

    #[error("cannot parse rational from {0:?}")]
    ParseRational(String),
}
