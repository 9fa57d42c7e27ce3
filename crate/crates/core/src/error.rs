use thiserror::Error;

/// Errors shared across the crate. Variants mirror the failure modes of the
/// individual operations; most are precondition violations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("component at a place is zero where a nonzero value is required")]
    ZeroComponent,
    #[error("exponent must be at least 2, got {0}")]
    InvalidExponent(i64),
    #[error("value outside the domain of the operation: {0}")]
    NotInDomain(String),
    #[error("element is not in the cone coordinate set I_1")]
    NotInI1,
    #[error("zero vector not allowed")]
    ZeroVector,
    #[error("vector is not primitive")]
    NotPrimitive,
    #[error("expected dimension {expected}, got {got}")]
    WrongDimension { expected: usize, got: usize },
    #[error("pair is linearly dependent (zero determinant)")]
    DependentPair,
    #[error("determinant is zero")]
    ZeroDeterminant,
    #[error("modulus has a prime factor outside S")]
    BadModulus,
    #[error("residue class is not coprime to L_S")]
    BadResidue,
    #[error("malformed region: {0}")]
    MalformedRegion(String),
    #[error("region is unbounded at some place")]
    UnboundedRegion,
    #[error("operation needs more p-adic digits than the working precision")]
    PrecisionExceeded,
    #[error("unsupported region shape: {0}")]
    UnsupportedShape(String),
    #[error("factorial denominator not invertible at p = {prime}")]
    FactorialNotInvertible { prime: u64 },
    #[error("rational has a denominator not supported on S")]
    NotAnSInteger,
}

pub type Result<T> = core::result::Result<T, Error>;
