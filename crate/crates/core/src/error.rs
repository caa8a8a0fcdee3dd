use num_bigint::BigInt;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero polynomial")]
    ZeroPolynomial,

    #[error("not real on circle")]
    NotRealOnCircle,

    #[error("empty interval: lower end must be below upper end")]
    EmptyInterval,

    #[error("mismatched cyclotomic orders {0} and {1}")]
    OrderMismatch(u64, u64),

    #[error("not real")]
    NotReal,

    #[error("matrix is not Hermitian")]
    NotHermitian,

    #[error("precision exhausted after {0} bits")]
    PrecisionExhausted(u32),

    #[error("degenerate on circle: determinant vanishes identically")]
    DegenerateOnCircle,

    #[error("size bound exceeded: {size} > {bound}")]
    BoundExceeded { size: usize, bound: usize },

    #[error("Alexander condition fails: |p(1)| = {0}")]
    NotAlexander(BigInt),

    #[error("submodule is not t-invariant")]
    NotInvariant,

    #[error("cannot certify exactness: {0}")]
    Uncertifiable(String),

    #[error("zero denominator")]
    ZeroDenominator,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Process exit code: 1 for bad input, 2 when a computation could not be certified.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::PrecisionExhausted(_) | Error::Uncertifiable(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
