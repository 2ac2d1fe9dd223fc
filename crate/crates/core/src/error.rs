use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("arity mismatch: {left} vs {right} variables")]
    ArityMismatch { left: usize, right: usize },

    #[error("basis too large: {size} monomials exceeds cap {cap}")]
    BasisTooLarge { size: u128, cap: usize },

    #[error("{what} too large: {size} exceeds cap {cap}")]
    TooLarge {
        what: &'static str,
        size: u128,
        cap: usize,
    },

    #[error("polynomial is not homogeneous")]
    NotHomogeneous,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("bad prime {0}: divides a denominator, retry with another prime")]
    BadPrime(u64),

    #[error("every supplied prime divides a denominator; retry with fresh primes")]
    AllPrimesBad,

    #[error("matrix of {rows}x{cols} exceeds the dense cap {cap}; use the modular path")]
    UseModularPath { rows: usize, cols: usize, cap: usize },

    #[error("malformed polynomial JSON: {0}")]
    Json(String),
}
