use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("{0} is not a prime power")]
    NotPrimePower(u64),

    #[error("field GF({p}^{m}) is outside the supported range")]
    FieldTooLarge { p: u32, m: u32 },

    #[error("no built-in primitive polynomial for GF({p}^{m})")]
    NoDefaultModulus { p: u32, m: u32 },

    #[error("invalid modulus: {0}")]
    BadModulus(String),

    #[error("modulus is reducible over GF({0})")]
    ReducibleModulus(u32),

    #[error("modulus is irreducible but x is not a primitive element")]
    NonPrimitiveModulus,

    #[error("zero has no multiplicative inverse")]
    ZeroInverse,

    #[error("{d} does not divide {m}")]
    NotDivisor { d: u32, m: u32 },

    #[error("ambient mismatch: {0}")]
    AmbientMismatch(String),

    #[error("unsupported parameters: {0}")]
    Unsupported(String),

    #[error("index {index} out of range (< {bound})")]
    OutOfRange { index: u64, bound: u64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("not a graph automorphism: {0}")]
    NotAutomorphism(String),

    #[error("quotient matrix is not well defined: {0}")]
    QuotientNotEquitable(String),

    #[error("Lloyd violation: quotient eigenvalues are not graph eigenvalues ({0})")]
    LloydViolation(String),

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
