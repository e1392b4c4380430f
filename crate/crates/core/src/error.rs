use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("field size {p}^{k} does not fit in 64 bits")]
    FieldTooLarge { p: u64, k: u32 },
    #[error("modulus is not a monic polynomial of degree {0}")]
    BadModulus(u32),
    #[error("modulus is reducible over GF({0})")]
    ReducibleModulus(u64),
    #[error("operands belong to different fields")]
    MixedFields,
    #[error("division by zero")]
    DivisionByZero,
    #[error("field element encoding {0} out of range")]
    BadElement(u64),
    #[error("not a subfield: {0}")]
    NotSubfield(String),
    #[error("zero polynomial has no {0}")]
    ZeroPolynomial(&'static str),
    #[error("parse error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("valuation of the zero function is infinite")]
    ZeroFunction,
    #[error("invalid place: {0}")]
    InvalidPlace(String),
    #[error("function has a pole at {0}")]
    Pole(String),
    #[error("place {0} is not rational")]
    NotRational(String),
    #[error("invalid divisor: {0}")]
    InvalidDivisor(String),
    #[error("invalid extension: {0}")]
    InvalidExtension(String),
    #[error("degenerate extension: {0}")]
    Degenerate(String),
    #[error("constant field extension detected: {0}")]
    ConstantFieldGrowth(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("series precision exhausted: {0}")]
    Precision(String),
    #[error("certification failed: {0}")]
    Certification(String),
    #[error("invalid code: {0}")]
    InvalidCode(String),
    #[error("conorm condition violated: {0}")]
    ConormCondition(String),
    #[error("parameter out of range: {0}")]
    Parameter(String),
    #[error("job error at {pointer:?}: {msg}")]
    Job { pointer: String, msg: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
