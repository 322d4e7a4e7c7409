use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate variable name `{0}`")]
    DuplicateVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("context {0} is empty")]
    EmptyContext(usize),
    #[error("contexts {0} and {1} contain the same variables")]
    DuplicateContext(usize, usize),
    #[error("variable `{0}` does not occur in any context")]
    UncoveredVariable(String),
    #[error("no context in the cover matches variable set {0:?}")]
    NoSuchContext(Vec<String>),

    #[error("row {context} has {got} cells, expected {expected}")]
    RowLength {
        context: usize,
        expected: usize,
        got: usize,
    },
    #[error("row {context} sums to {sum}, expected exactly 1")]
    RowSum { context: usize, sum: String },
    #[error("negative probability {value} in row {context}, cell {cell}")]
    NegativeProbability {
        context: usize,
        cell: u32,
        value: String,
    },
    #[error("support of context {0} is empty")]
    EmptySupport(usize),
    #[error("cell index {cell} out of range for context {context}")]
    CellOutOfRange { context: usize, cell: u32 },
    #[error("models are defined over different covers")]
    CoverMismatch,
    #[error("mixture weights do not form a distribution: {0}")]
    BadWeights(String),

    #[error("{got} variables exceed the enumeration limit of {limit}")]
    LimitExceeded { got: usize, limit: usize },

    #[error("formula parse error at byte {at}: {message}")]
    FormulaParse { at: usize, message: String },
    #[error("formula refers to `{variable}`, which is outside its context")]
    VariableOutsideContext { variable: String },
    #[error("cannot build a formula for an empty set of assignments")]
    EmptyAssignmentSet,

    #[error(
        "assignment {cell} in context {context} extends to a global section; no witness there"
    )]
    ExtendsToSection { context: usize, cell: u32 },
    #[error("cell {cell} of context {context} has probability 0; not a support element")]
    NotInSupport { context: usize, cell: u32 },
    #[error("expectation value {0} lies outside [-1, 1]")]
    ExpectationRange(String),
    #[error("multiset with maximal satisfiable cardinality {max_sat} is not {bound}-consistent")]
    NotConsistent { bound: u64, max_sat: u64 },
    #[error("inequality fails on the deterministic model {witness}; it is not valid for non-contextual models")]
    InvalidOnDeterministic { witness: String },
    #[error("formulas are jointly satisfiable; the contradiction bound does not apply")]
    JointlySatisfiable,
    #[error("entry for context {0} is not (the negation of) the even-parity formula")]
    NotParityForm(usize),
    #[error("more than one multiset entry is tagged with context {0}")]
    RepeatedContext(usize),
    #[error("coefficient vector has length {got}, expected {expected}")]
    CoefficientLength { expected: usize, got: usize },

    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),

    #[error("state vector has squared norm {0}, expected 1")]
    NotNormalized(f64),
    #[error("dimension {0} exceeds the supported maximum of {1}")]
    DimensionTooLarge(usize, usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix for `{variable}` is not a projector: {reason}")]
    NotAProjector { variable: String, reason: String },
    #[error("observables `{0}` and `{1}` do not commute but share a context")]
    NonCommuting(String, String),
    #[error("no observable assigned to variable `{0}`")]
    MissingObservable(String),
    #[error("ray configuration admits no orthogonal family of full dimension {0}")]
    NoFullContext(usize),
    #[error("rays {0} and {1} coincide")]
    DuplicateRay(usize, usize),

    #[error("invalid scenario parameters: {0}")]
    BadScenario(String),
    #[error("malformed rational `{0}`")]
    BadRational(String),
    #[error("malformed document: {0}")]
    BadDocument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
