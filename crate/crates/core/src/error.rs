use thiserror::Error;

/// Errors raised when an input violates an operation's preconditions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("value {value} is out of range: {reason}")]
    OutOfRange { value: u64, reason: &'static str },

    #[error("exponent k = 0 is not accepted here")]
    ZeroExponent,

    #[error("modulus mismatch: {left} vs {right}")]
    ModulusMismatch { left: u64, right: u64 },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("prime family of size {size} exceeds the enumeration cap of {cap}")]
    SizeCap { size: usize, cap: usize },

    #[error("search box {k_max}x{m_max} exceeds the guard of {guard}")]
    GuardExceeded { k_max: u64, m_max: u64, guard: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
