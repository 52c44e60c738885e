use thiserror::Error;

/// Errors raised by the constructions in this crate.
///
/// Variants that signal an internal inconsistency (`BijectionFailure`,
/// `NaturalityFailure`) should never surface on valid input.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("duplicate element `{0}`")]
    DuplicateElement(String),
    #[error("unknown element `{0}`")]
    UnknownElement(String),
    #[error("relations create a cycle through `{0}` and `{1}`")]
    CycleDetected(String, String),
    #[error("identifier `{0}` already in use")]
    IdentifierClash(String),
    #[error("tuple is not weakly increasing: {0}")]
    NotMonotone(String),
    #[error("map is not order preserving: {0}")]
    NotOrderPreserving(String),
    #[error("index {index} out of range (limit {limit})")]
    IndexOutOfRange { index: usize, limit: usize },
    #[error("malformed simplicial set: {0}")]
    MalformedSSet(String),
    #[error("not a simplicial map: {0}")]
    NotASimplicialMap(String),
    #[error("inconsistent constraint on generator `{0}`")]
    InconsistentConstraint(String),
    #[error("not a functor: {0}")]
    NotAFunctor(String),
    #[error("budget exceeded: {what} needs more than {limit}")]
    BudgetExceeded { what: String, limit: usize },
    #[error("phi is not simplicial on `{0}`")]
    PhiNotSimplicial(String),
    #[error("phi is not monotone on `{0}`")]
    PhiNotMonotone(String),
    #[error("base posets do not match")]
    BaseMismatch,
    #[error("map is not filtered on generator `{0}`")]
    NotFilteredMap(String),
    #[error("square does not commute on generator `{0}`")]
    SquareDoesNotCommute(String),
    #[error("adjunction bijection failed: {0}")]
    BijectionFailure(String),
    #[error("`{0}` is not a subchain of `{1}`")]
    NotASubchain(String, String),
    #[error("naturality failed at {0}")]
    NaturalityFailure(String),
    #[error("poset map is not an isomorphism")]
    NotAnIsomorphismOfPosets,
    #[error("invalid attachment: {0}")]
    InvalidAttachment(String),
    #[error("zigzag bound must be at least 1")]
    BoundTooSmall,
    #[error("negative coordinate {0}")]
    NegativeCoordinate(f64),
    #[error("coordinates sum to {0}, outside tolerance")]
    SumOutOfTolerance(f64),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("glue mismatch: deviation {deviation:e} at {sample}")]
    GlueMismatch { deviation: f64, sample: String },
    #[error("sampled map is not filtered at sample {0}")]
    NotFiltered(usize),
    #[error("unsupported object for export: {0}")]
    UnsupportedObject(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::InvalidInput(e.to_string())
    }
}
