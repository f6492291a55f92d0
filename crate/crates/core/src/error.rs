use thiserror::Error;

/// Errors raised by group operations, constructions and the presentation DSL.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),

    #[error("element is not a member of the subgroup: {0}")]
    NotMember(String),

    #[error("subgroup generator list contains the identity word")]
    IdentityGeneratorWord,

    #[error("operation not supported: {0}")]
    Unsupported(String),

    #[error("a pinch needs the inverse isomorphism but it is unavailable: {0}")]
    PhiInverseUnavailable(String),

    #[error("extension is not ascending: the domain subgroup is proper")]
    NotAscending,

    #[error("generator `{0}` lies in {1}")]
    GeneratorInSubgroup(String, &'static str),

    #[error("generator `{0}` is the identity")]
    IdentityGenerator(String),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("duplicate element `{0}`")]
    DuplicateElement(String),

    #[error("subgroup is not proper: {0}")]
    SubgroupNotProper(String),

    #[error("bounded search exhausted: {0}")]
    SearchExhausted(String),

    #[error("law substitution freely reduces to the empty word")]
    SubstitutionCollapsed,

    #[error("no admissible element pair exists: {0}")]
    NoPairFound(String),

    #[error("cross-validation failed: {0}")]
    CrossValidationFailed(String),

    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),

    #[error("parse error at {line}:{column}: expected {expected}, found {found}")]
    Parse {
        line: usize,
        column: usize,
        expected: String,
        found: String,
    },

    #[error("validation error: {0}")]
    Validation(String),

    #[error("corpus missing: {0}")]
    CorpusMissing(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable code for this error variant.
    pub fn code(&self) -> &'static str {
        match self {
            Error::UnknownSymbol(_) => "UNKNOWN_SYMBOL",
            Error::NotMember(_) => "NOT_MEMBER",
            Error::IdentityGeneratorWord => "IDENTITY_GENERATOR_WORD",
            Error::Unsupported(_) => "UNSUPPORTED",
            Error::PhiInverseUnavailable(_) => "PHI_INVERSE_UNAVAILABLE",
            Error::NotAscending => "NOT_ASCENDING",
            Error::GeneratorInSubgroup(..) => "GENERATOR_IN_SUBGROUP",
            Error::IdentityGenerator(_) => "IDENTITY_GENERATOR",
            Error::PreconditionViolated(_) => "PRECONDITION_VIOLATED",
            Error::DuplicateElement(_) => "DUPLICATE_ELEMENT",
            Error::SubgroupNotProper(_) => "SUBGROUP_NOT_PROPER",
            Error::SearchExhausted(_) => "SEARCH_EXHAUSTED",
            Error::SubstitutionCollapsed => "SUBSTITUTION_COLLAPSED",
            Error::NoPairFound(_) => "NO_PAIR_FOUND",
            Error::CrossValidationFailed(_) => "CROSS_VALIDATION_FAILED",
            Error::InvalidTable(_) => "INVALID_TABLE",
            Error::Parse { .. } => "PARSE_ERROR",
            Error::Validation(_) => "VALIDATION_ERROR",
            Error::CorpusMissing(_) => "CORPUS_MISSING",
            Error::Io(_) => "IO_ERROR",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
