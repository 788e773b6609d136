use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },

    #[error("malformed JSON input: {0}")]
    Json(String),

    #[error("polynomial is not homogeneous: term of degree {found} where degree {expected} was expected")]
    NotHomogeneous { expected: u32, found: u32 },

    #[error("monomial with exponent vector {0:?} is missing")]
    MissingMonomial(Vec<u32>),

    #[error("coefficient of {exponent:?} must be positive, got {value}")]
    NonPositiveCoefficient { exponent: Vec<u32>, value: i64 },

    #[error("polynomial must have at least two variables, found {0}")]
    AritySmallerThanTwo(usize),

    #[error("{what} exceeds the supported limit of {limit}")]
    LimitExceeded { what: &'static str, limit: u64 },

    #[error("vertex {coords:?} is not a vertex of level {level}")]
    InvalidVertex { level: u32, coords: Vec<u32> },

    #[error("level {level} is beyond the diagram horizon {max_level}")]
    BeyondHorizon { level: u32, max_level: u32 },

    #[error("direction {0} is out of range")]
    InvalidDirection(usize),

    #[error("invalid multiplicity table entry: {0}")]
    InvalidMultiplicity(String),

    #[error("edge labels into {vertex:?} are not a bijection onto 1..={indegree}")]
    NonBijectiveLabeling { vertex: Vec<u32>, indegree: usize },

    #[error("unknown ordering preset {0:?}")]
    UnknownPreset(String),

    #[error("path is maximal into its terminal vertex; its successor lies below the horizon")]
    MaximalAtHorizon,

    #[error("path is minimal into its terminal vertex; its predecessor lies below the horizon")]
    MinimalAtHorizon,

    #[error("rank {rank} is out of range for a tower of size {dimension}")]
    RankOutOfRange { rank: String, dimension: String },

    #[error("tower of {vertex:?} has {dimension} paths, above the budget of {budget}")]
    TowerTooLarge {
        vertex: Vec<u32>,
        dimension: String,
        budget: u64,
    },

    #[error("malformed path: {0}")]
    InvalidPath(String),

    #[error("chain lists have inconsistent lengths: {splitting} splitting, {shared} shared")]
    LengthMismatch { splitting: usize, shared: usize },

    #[error("distinguished source vertex of {vertex:?} in direction {direction} does not exist")]
    DsvAbsent { vertex: Vec<u32>, direction: usize },

    #[error("chain cannot be extended past {0} links")]
    NoExtension(usize),

    #[error("ladder precondition violated: need {low} <= z(j) = {value} <= {high}")]
    LadderPreconditionViolated { value: u32, low: u32, high: u32 },

    #[error("hypothesis not met: {0}")]
    HypothesisNotMet(String),

    #[error("precondition not met: {0}")]
    PreconditionNotMet(String),

    #[error("measures are only defined for the coefficient multiplicity mode")]
    MeasureModeUnsupported,

    #[error("invalid weights: {0}")]
    InvalidWeights(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
