use thiserror::Error;

/// Which cumulative distribution function of a p-box an error refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Bound {
    Lower,
    Upper,
}

impl std::fmt::Display for Bound {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bound::Lower => f.write_str("lower"),
            Bound::Upper => f.write_str("upper"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("chain has no classes")]
    EmptyClassList,
    #[error("class {0} is empty")]
    EmptyClass(usize),
    #[error("label {0:?} appears more than once")]
    DuplicateLabel(String),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("invalid rational {0:?}")]
    InvalidNumber(String),
    #[error("{which} bound has {found} values, expected {expected}")]
    LengthMismatch { which: Bound, expected: usize, found: usize },
    #[error("{which} bound value at class {index} is outside [0, 1]")]
    OutOfRange { which: Bound, index: usize },
    #[error("{which} bound decreases at class {index}")]
    NotMonotone { which: Bound, index: usize },
    #[error("lower bound exceeds upper bound at class {index}")]
    BoundOrder { index: usize },
    #[error("{which} bound does not reach 1 at the top class")]
    TopNotOne { which: Bound },
    #[error("malformed interval union: {0}")]
    MalformedHSet(String),
    #[error("interval endpoints {x:?} and {y:?} are not strictly ordered")]
    NotStrictlyOrdered { x: String, y: String },
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
    #[error("possibility distribution is not normalized (maximum {0})")]
    NotNormalized(String),
    #[error("possibility value for {0:?} is outside [0, 1]")]
    PossibilityOutOfRange(String),
    #[error("empty possibility distribution")]
    EmptyDistribution,
    #[error("expected {expected} components, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("marginal family is empty")]
    EmptyFamily,
    #[error("label {0:?} contains the reserved separator '|'")]
    ReservedSeparator(String),
    #[error("instance too large: {size} exceeds limit {limit}")]
    TooLarge { size: usize, limit: usize },
    #[error("models are defined on different label sets")]
    ChainMismatch,
    #[error("joint distribution does not match the family: {0}")]
    JointMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;
