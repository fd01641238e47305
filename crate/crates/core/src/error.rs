use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("variable tag mismatch: {0} vs {1}")]
    VarMismatch(String, String),
    #[error("not divisible: remainder nonzero")]
    NotDivisible,
    #[error("division by zero polynomial")]
    DivisionByZero,
    #[error("zero operand rejected")]
    ZeroOperand,
    #[error("gcd of two zero polynomials")]
    BothZero,
    #[error("degree too small: need degree >= {0}")]
    DegreeTooSmall(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{0} is not prime")]
    NotPrime(String),
    #[error("leading coefficient vanishes mod {0}")]
    LeadingCoeffVanishes(u64),
    #[error("zero input rejected")]
    ZeroInput,
    #[error("resource cap exceeded: requested degree {requested} > cap {cap} (set MISIUREWICZ_RESOURCE_CAP to raise)")]
    ResourceCap { requested: u64, cap: u64 },
    #[error("exponent pattern violation: {0}")]
    PatternViolation(String),
    #[error("root isolation failed to certify separation at tolerance {0}")]
    IllConditioned(f64),
    #[error("no period found within {0} steps")]
    NoPeriodFound(u32),
    #[error("orbit unbounded within {0} steps")]
    OrbitUnbounded(u32),
    #[error("internal invariant violated: {0}")]
    Internal(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
