use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Everything that can go wrong while building or combining values.
///
/// Index tuples in the validation variants refer to point positions and
/// name the first offender found in row-major scan order.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("distance matrix is {rows}x? but there are {points} points")]
    DimensionMismatch { points: usize, rows: usize },
    #[error("duplicate point label `{0}`")]
    DuplicateLabel(String),
    #[error("space has no points")]
    EmptySpace,
    #[error("d({i},{j}) != d({j},{i})")]
    NotSymmetric { i: usize, j: usize },
    #[error("d({i},{i}) is not zero")]
    NonzeroDiagonal { i: usize },
    #[error("d({i},{j}) is not positive")]
    NonpositiveOffDiagonal { i: usize, j: usize },
    #[error("strong triangle inequality fails: d({i},{j}) > max(d({i},{k}), d({k},{j}))")]
    StrongTriangleViolation { i: usize, j: usize, k: usize },
    #[error("radius must be positive")]
    NonpositiveRadius,
    #[error("{what} needs {needed} elements, budget is {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: usize,
        budget: usize,
    },
    #[error("operands live on different spaces")]
    MismatchedSpaces,
    #[error("unknown point `{0}`")]
    UnknownPoint(String),
    #[error("point index {0} out of range")]
    PointIndexOutOfRange(usize),
    #[error("measure is not normalized")]
    NotNormalized,
    #[error("weight {0} is out of range for a max-plus measure")]
    WeightOutOfRange(String),
    #[error("every atom has weight -inf")]
    EmptySupport,
    #[error("no atoms given")]
    NoAtoms,
    #[error("operands have different measure kinds")]
    MixedKinds,
    #[error("operation not defined for this measure kind")]
    KindMismatch,
    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),
    #[error("arity mismatch: expected {expected}, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("group order exceeds budget {budget}")]
    GroupBudgetExceeded { budget: usize },
    #[error("test function is not defined on `{0}`")]
    IncompleteFunction(String),
    #[error("(+inf) + (-inf) is undefined")]
    UndefinedSum,
    #[error("subset is empty")]
    EmptySubset,
    #[error("parse error: {0}")]
    Parse(String),
}
