use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("truncation mismatch: {0} vs {1}")]
    TruncationMismatch(usize, usize),

    #[error("Jacobi identity fails on basis triple ({0}, {1}, {2})")]
    JacobiViolation(usize, usize, usize),

    #[error("unknown basis element {0:?}")]
    UnknownBasis(String),

    #[error("schema violation: {0}")]
    Schema(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("subspace is not a subalgebra")]
    NotSubalgebra,

    #[error("complement does not span a vector-space complement of the isotropy")]
    BadComplement,

    #[error("action is not a representation: rho([e{0}, e{1}]) != [rho(e{0}), rho(e{1})]")]
    NotRepresentation(usize, usize),

    #[error("substitution has a nonzero constant term in component {0}")]
    NonzeroConstantTerm(usize),

    #[error("substitution has a singular linear part")]
    SingularLinearPart,

    #[error("vector fields must be planar (2 variables), got {0}")]
    NotPlanar(usize),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("unknown catalog entry {0:?}")]
    UnknownEntry(String),

    #[error("generators do not close under the bracket: {0}")]
    NotClosed(String),

    #[error("truncation degree {0} too low: {1}")]
    TruncationTooLow(usize, String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable identifier for the error kind.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "dimension_mismatch",
            Error::TruncationMismatch(..) => "truncation_mismatch",
            Error::JacobiViolation(..) => "jacobi_violation",
            Error::UnknownBasis(_) => "unknown_basis",
            Error::Schema(_) => "schema_violation",
            Error::Parse(_) => "parse_error",
            Error::NotSubalgebra => "not_subalgebra",
            Error::BadComplement => "bad_complement",
            Error::NotRepresentation(..) => "not_representation",
            Error::NonzeroConstantTerm(_) => "nonzero_constant_term",
            Error::SingularLinearPart => "singular_linear_part",
            Error::NotPlanar(_) => "not_planar",
            Error::Parameter(_) => "parameter_error",
            Error::UnknownEntry(_) => "unknown_entry",
            Error::NotClosed(_) => "not_closed",
            Error::TruncationTooLow(..) => "truncation_too_low",
            Error::InvalidArgument(_) => "invalid_argument",
        }
    }
}
