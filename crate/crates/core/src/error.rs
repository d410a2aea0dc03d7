use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{what}: size {size} exceeds cap {cap}")]
    CapExceeded { what: &'static str, size: u128, cap: u128 },
    #[error("no irreducible polynomial of degree {degree} found")]
    NoIrreducibleFound { degree: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("cofactor {0} exceeds the 64-bit factoring limit")]
    TooLarge(u128),
    #[error("q^n - 1 is too large to factor; use a corollary route")]
    TooLargeToFactor,
    #[error("operation requires a nonzero element")]
    ZeroElement,
    #[error("{0} is not a divisor of the group order")]
    NotADivisor(String),
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("S_{term}: |S| = {magnitude} exceeds bound {bound}")]
    BoundViolated { term: usize, magnitude: f64, bound: f64 },
    #[error("arithmetic overflow computing {0}")]
    Overflow(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("discrete-log table not built for this field")]
    NoDlogTable,
    #[error("cache: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, Error>;
