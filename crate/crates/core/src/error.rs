use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoreError {
    /// Row indices are 0-based; the message shows them 1-based.
    #[error("duplicate rows {} and {}", .first + 1, .second + 1)]
    DuplicateRow { first: usize, second: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("score vector must not be empty")]
    EmptyScores,
    #[error("scores must be nondecreasing for this solver")]
    NotMonotone,
    #[error("n = {n} exceeds the permutation limit {cap}")]
    PermutationLimitExceeded { n: usize, cap: usize },
    #[error("linear system is inconsistent")]
    InconsistentSystem,
    #[error("coefficient oracle returned different answers for the same cell")]
    OracleImpure,
    #[error("coefficient oracle failed: {0}")]
    Oracle(String),
    #[error("rational snapping failed: {0}")]
    SnapFailed(String),
    #[error("cut direction is zero or degenerate at working precision")]
    DegenerateDirection,
    #[error("floating point precision exhausted")]
    PrecisionExhausted,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
