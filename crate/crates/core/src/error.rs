use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {0} does not fit machine-word arithmetic (must be < 2^31)")]
    PrimeTooLarge(u64),
    #[error("field order {p}^{m} overflows 64 bits")]
    FieldTooLarge { p: u64, m: usize },
    #[error("extension degree must be at least 1")]
    ZeroExtensionDegree,
    #[error("invalid field modulus: {0}")]
    InvalidModulus(String),
    #[error("operands belong to different fields")]
    ContextMismatch,
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("gcd of two zero polynomials is undefined")]
    ZeroGcd,
    #[error("modulus must be a nonconstant polynomial")]
    ConstantModulus,
    #[error("polynomial must be nonconstant")]
    ConstantPolynomial,
    #[error("factorization failed: {0}")]
    Factorization(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("matrix is singular")]
    Singular,
    #[error("linear system is inconsistent")]
    Inconsistent,
    #[error("linear system is underdetermined (rank {rank} < {needed})")]
    Underdetermined { rank: usize, needed: usize },
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("invalid plaintext polynomial: {0}")]
    InvalidPlaintext(String),
    #[error("sampling gave up after {0} attempts")]
    SamplingExhausted(usize),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}
