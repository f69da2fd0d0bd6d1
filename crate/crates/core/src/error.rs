use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: expected {expected}, found {found}")]
    DimensionMismatch {
        op: &'static str,
        expected: String,
        found: String,
    },
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("field mismatch")]
    FieldMismatch,
    #[error("category mismatch: {0}")]
    CategoryMismatch(String),

    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("unknown arrow `{0}`")]
    UnknownArrow(String),
    #[error("duplicate id `{0}`")]
    DuplicateId(String),
    #[error("arrows do not compose: {0}")]
    NotComposable(String),
    #[error("ideal generator `{0}` has length < 2")]
    GeneratorTooShort(String),
    #[error("ideal is not admissible: {0}")]
    NotAdmissible(String),
    #[error("admissibility undecided: surviving paths reach the search cap {cap}")]
    AdmissibilityCapExceeded { cap: usize },

    #[error("composition is not associative: {0}")]
    NotAssociative(String),
    #[error("unit law fails: {0}")]
    UnitLaw(String),
    #[error("category is not basic with split local endomorphism rings: {0}")]
    NotBasic(String),
    #[error("action is not functorial: {0}")]
    NotFunctorial(String),
    #[error("map is not natural: {0}")]
    NotNatural(String),
    #[error("morphism is not idempotent")]
    NotIdempotent,
    #[error("field of characteristic {found} too small, need p > {dim} (e.g. p = {required})")]
    FieldTooSmall {
        found: u64,
        dim: usize,
        required: u64,
    },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("idempotent search exhausted: {0}")]
    SearchExhausted(String),

    #[error("the zero module is not allowed here")]
    ZeroModule,
    #[error("module has a projective direct summand at object `{object}`")]
    ProjectiveSummand { object: String, dims: Vec<usize> },
    #[error("module is projective")]
    Projective,
    #[error("module is decomposable into {0} summands")]
    Decomposable(usize),
    #[error("relation violated: {0}")]
    RelationViolated(String),
    #[error("invalid complex specification: {0}")]
    InvalidSpec(String),
    #[error("map is not null-homotopic")]
    NotNullHomotopic,
    #[error("map does not factor: {0}")]
    NoFactorization(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

impl Error {
    /// Errors caused by a mathematical precondition on the input (as opposed
    /// to malformed data or a failed certificate).
    pub fn is_precondition(&self) -> bool {
        matches!(
            self,
            Error::NotAdmissible(_)
                | Error::AdmissibilityCapExceeded { .. }
                | Error::FieldTooSmall { .. }
                | Error::ZeroModule
                | Error::ProjectiveSummand { .. }
                | Error::Projective
                | Error::Decomposable(_)
                | Error::NotBasic(_)
                | Error::NotNullHomotopic
                | Error::NoFactorization(_)
                | Error::Unsupported(_)
                | Error::SearchExhausted(_)
                | Error::NotIdempotent
                | Error::GeneratorTooShort(_)
        )
    }

    pub fn is_verification(&self) -> bool {
        matches!(
            self,
            Error::VerificationFailed(_)
                | Error::NotAssociative(_)
                | Error::UnitLaw(_)
                | Error::NotFunctorial(_)
                | Error::NotNatural(_)
                | Error::RelationViolated(_)
        )
    }
}
