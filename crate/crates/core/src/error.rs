use thiserror::Error;

/// Errors raised by the library. Each variant carries a stable short code
/// (see [`Error::code`]) used by the command-line front end.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("argument must be positive, got {0}")]
    NonPositive(i128),

    #[error("{0} is not a negative discriminant (must be < 0 and = 0, 1 mod 4)")]
    NotADiscriminant(i64),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("coefficient {name} = {value} is not allowed: {reason}")]
    HalfIntegerViolation {
        name: &'static str,
        value: String,
        reason: &'static str,
    },

    #[error("polynomial is not integer valued: P{point:?} = {value}")]
    NotIntegerValued { point: (i64, i64), value: String },

    #[error("quadratic part is not positive definite")]
    NotPositiveDefinite,

    #[error("minimum over R^2 is negative ({0})")]
    NegativeMinimum(String),

    #[error("order basis is not closed under multiplication: b{0}*b{1} escapes the lattice")]
    NotClosed(usize, usize),

    #[error("order does not contain 1")]
    MissingUnit,

    #[error("order basis has rank < 4")]
    RankDeficient,

    #[error("no auxiliary prime q <= {bound} found for p = {p}")]
    AuxiliaryPrimeNotFound { p: u64, bound: u64 },

    #[error("order for p = {p} has reduced discriminant {found}, expected {p}")]
    MaximalityCheckFailed { p: u64, found: String },

    #[error("Gross lattice for p = {p}: {what}")]
    InvariantMismatch { p: u64, what: String },

    #[error("Gram determinant {0} is not a perfect square up to sign")]
    NonSquareDiscriminant(String),

    #[error("class polynomial of discriminant {0}: rounding residual too large at every precision tried")]
    PrecisionExhausted(i64),

    #[error("|discriminant| {value} exceeds the configured bound {bound}")]
    DiscriminantTooLarge { value: i64, bound: u64 },

    #[error("prime {0} is not in the supported one-class set {{2, 3, 5, 7, 13}}")]
    UnsupportedPrime(u64),

    #[error("invalid ternary form: {0}")]
    InvalidTernaryForm(String),

    #[error("invalid binary form: {0}")]
    InvalidBinaryForm(String),

    #[error("cache: {0}")]
    Cache(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::NonPositive(_) => "E_NONPOSITIVE",
            Error::NotADiscriminant(_) => "E_DISCRIMINANT",
            Error::NotPrime(_) => "E_NOT_PRIME",
            Error::HalfIntegerViolation { .. } => "E_HALF_INTEGER",
            Error::NotIntegerValued { .. } => "E_NOT_INTEGER_VALUED",
            Error::NotPositiveDefinite => "E_NOT_POSITIVE_DEFINITE",
            Error::NegativeMinimum(_) => "E_NEGATIVE_MINIMUM",
            Error::NotClosed(..) => "E_NOT_CLOSED",
            Error::MissingUnit => "E_MISSING_UNIT",
            Error::RankDeficient => "E_RANK_DEFICIENT",
            Error::AuxiliaryPrimeNotFound { .. } => "E_AUX_PRIME",
            Error::MaximalityCheckFailed { .. } => "E_NOT_MAXIMAL",
            Error::InvariantMismatch { .. } => "E_INVARIANT_MISMATCH",
            Error::NonSquareDiscriminant(_) => "E_NON_SQUARE_DISC",
            Error::PrecisionExhausted(_) => "E_PRECISION",
            Error::DiscriminantTooLarge { .. } => "E_DISC_TOO_LARGE",
            Error::UnsupportedPrime(_) => "E_UNSUPPORTED_PRIME",
            Error::InvalidTernaryForm(_) => "E_TERNARY_FORM",
            Error::InvalidBinaryForm(_) => "E_BINARY_FORM",
            Error::Cache(_) => "E_CACHE",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
