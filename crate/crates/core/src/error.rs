use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid discriminant {discriminant}: {reason}")]
    InvalidDiscriminant { discriminant: i64, reason: String },

    #[error("invalid prime {p}: {reason}")]
    InvalidPrime { p: u64, reason: String },

    #[error("invalid polynomial: {0}")]
    InvalidPolynomial(String),

    #[error("polynomial is reducible over k: factor {factor}")]
    Reducible { factor: String },

    #[error("Hasse invariants violate reciprocity: they sum to {sum}, not an integer")]
    Reciprocity { sum: String },

    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("invalid order genus: {0}")]
    InvalidGenus(String),

    #[error("sampling bound {0} is below 2")]
    InvalidBound(u64),

    #[error("undetermined prime {prime}: the Dedekind criterion does not certify maximality there")]
    UndeterminedPrime { prime: String },

    #[error("K does not embed into A: local obstruction at {place}")]
    NotEmbeddable { place: String },

    #[error("base field mismatch: {0}")]
    FieldMismatch(String),

    #[error("class {0} is not an element of the class group")]
    NotInGroup(String),

    #[error("singular pseudo-basis matrix")]
    SingularBasis,

    #[error("oracle not applicable: {0}")]
    OracleNotApplicable(String),

    #[error("oracle mismatch: {0}")]
    OracleMismatch(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable error code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidDiscriminant { .. } => "invalid_discriminant",
            Error::InvalidPrime { .. } => "invalid_prime",
            Error::InvalidPolynomial(_) => "invalid_polynomial",
            Error::Reducible { .. } => "reducible_polynomial",
            Error::Reciprocity { .. } => "reciprocity_violation",
            Error::InvalidAlgebra(_) => "invalid_algebra",
            Error::InvalidGenus(_) => "invalid_genus",
            Error::InvalidBound(_) => "invalid_bound",
            Error::UndeterminedPrime { .. } => "undetermined_prime",
            Error::NotEmbeddable { .. } => "not_embeddable",
            Error::FieldMismatch(_) => "field_mismatch",
            Error::NotInGroup(_) => "class_not_in_group",
            Error::SingularBasis => "singular_basis",
            Error::OracleNotApplicable(_) => "oracle_not_applicable",
            Error::OracleMismatch(_) => "oracle_mismatch",
            Error::Config(_) => "config",
            Error::Io(_) => "io",
        }
    }

    /// Process exit code: 1 validation, 2 undetermined prime, 3 oracle mismatch.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::UndeterminedPrime { .. } => 2,
            Error::OracleMismatch(_) => 3,
            _ => 1,
        }
    }
}
