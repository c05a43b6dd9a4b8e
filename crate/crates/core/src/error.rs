use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not a negative fundamental discriminant")]
    InvalidDiscriminant(i64),

    #[error("class group of discriminant {0} has exponent greater than 2")]
    ExponentTooLarge(i64),

    #[error("forms live over different orders ({0} vs {1})")]
    DiscriminantMismatch(i64, i64),

    #[error("invalid Hermitian form: {0}")]
    InvalidForm(String),

    #[error("invalid ideal: {0}")]
    InvalidIdeal(String),

    #[error("search aborted after {0} candidate pairs")]
    SearchLimit(u64),

    #[error("theta series needs {needed} terms but the limit is {limit}")]
    PrecisionUnreachable { needed: u64, limit: u64 },

    #[error("period matrix is not a Jacobian point: theta constant {0} vanishes")]
    VanishingTheta(usize),

    #[error("singular curve: {0}")]
    SingularCurve(String),

    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;
