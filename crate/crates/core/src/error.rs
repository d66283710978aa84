use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("{0} is not a prime below 2^31")]
    NotPrime(u64),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("eigenvalue list contains a repeated value at positions {0} and {1}")]
    DuplicateEigenvalue(usize, usize),

    #[error("index {index} out of range 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("invalid parameter array: {0}")]
    InvalidParameterArray(String),

    #[error("not a Leonard pair: {0}")]
    NotALeonardPair(String),

    #[error("split basis degenerates at index {0}")]
    DegenerateSplit(usize),

    #[error("intertwining bilinear form has a solution space of dimension {0}, expected 1")]
    NonUniqueForm(usize),

    #[error("eigenvalues agree with dual eigenvalues but the second split sequence is not palindromic")]
    InconsistentArray,

    #[error("the Leonard system is not self-dual")]
    NotSelfDual,

    #[error("inner product {0} vanishes")]
    ZeroInnerProduct(&'static str),

    #[error("sequence {0} is not a basis")]
    SingularBasis(String),

    #[error("unknown basis identifier {0:?}")]
    UnknownBasis(String),

    #[error("flags are not opposite: {0}")]
    NotOpposite(String),

    #[error("candidate space of {candidates} exceeds the enumeration budget {budget}")]
    BudgetExceeded { candidates: u128, budget: u128 },

    #[error("found {found} of {limit} certified arrays within {draws} draws")]
    ExhaustedTrials { found: usize, limit: usize, draws: u64 },

    #[error("invalid search configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

impl Error {
    /// Stable machine-readable tag, used in CLI error objects.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "DivisionByZero",
            Error::NotPrime(_) => "NotPrime",
            Error::FieldMismatch(_) => "FieldMismatch",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::SingularMatrix => "SingularMatrix",
            Error::DuplicateEigenvalue(..) => "DuplicateEigenvalue",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::InvalidParameterArray(_) => "InvalidParameterArray",
            Error::NotALeonardPair(_) => "NotALeonardPair",
            Error::DegenerateSplit(_) => "DegenerateSplit",
            Error::NonUniqueForm(_) => "NonUniqueForm",
            Error::InconsistentArray => "InconsistentArray",
            Error::NotSelfDual => "NotSelfDual",
            Error::ZeroInnerProduct(_) => "ZeroInnerProduct",
            Error::SingularBasis(_) => "SingularBasis",
            Error::UnknownBasis(_) => "UnknownBasis",
            Error::NotOpposite(_) => "NotOpposite",
            Error::BudgetExceeded { .. } => "BudgetExceeded",
            Error::ExhaustedTrials { .. } => "ExhaustedTrials",
            Error::InvalidConfig(_) => "InvalidConfig",
            Error::Parse(_) => "Parse",
        }
    }
}
