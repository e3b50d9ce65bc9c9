use thiserror::Error;

use crate::formulas::FormulaDiscrepancy;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} out of range for rank {rank}")]
    IndexOutOfRange { index: usize, rank: usize },

    #[error("root range ({i}, {j}) requires i <= j")]
    BadRootRange { i: usize, j: usize },

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("q-bracket of a zero power")]
    ZeroPower,

    #[error("content mismatch: expected {expected}, found {found}")]
    ContentMismatch { expected: String, found: String },

    #[error("malformed row permutation: {0}")]
    MalformedPermutation(String),

    #[error("weight is degenerate: B vanishes at l = {witness}")]
    DegenerateWeight { witness: String },

    #[error("internal invariant violated: {0}")]
    InternalInvariantViolation(String),

    #[error(transparent)]
    Formula(#[from] Box<FormulaDiscrepancy>),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
