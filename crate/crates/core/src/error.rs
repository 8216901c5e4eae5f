use thiserror::Error;

use crate::group::GroupElement;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("modulus {0} is outside the supported range [2, 64]")]
    InvalidModulus(u32),

    #[error("sequences live in different groups (moduli {0} and {1})")]
    GroupMismatch(u32, u32),

    #[error("not a subsequence: {0}")]
    NotASubsequence(String),

    #[error("invalid length range [{lmin}, {lmax}] for a sequence of length {len}")]
    InvalidRange { lmin: usize, lmax: usize, len: usize },

    #[error("sum mismatch: removed terms sum to {removed}, added terms sum to {added}")]
    SumMismatch { removed: GroupElement, added: GroupElement },

    #[error("homomorphic images of the swapped parts have different sums")]
    HomSumMismatch,

    #[error("{0}")]
    InvalidX(String),

    #[error("block counts must all be at least 1 (got a={a}, b={b}, c={c})")]
    InvalidCounts { a: u32, b: u32, c: u32 },

    #[error("({0}, {1}) is not a basis")]
    NotABasis(GroupElement, GroupElement),

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("the sequence is empty")]
    EmptySequence,

    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("pattern unavailable: {0}")]
    PatternUnavailable(String),

    #[error("{m} does not divide {n} (or is smaller than 2)")]
    NotADivisor { m: u32, n: u32 },

    #[error("{g} and {rep} lie in different fibers of the homomorphism")]
    FiberMismatch { g: GroupElement, rep: GroupElement },

    #[error("invalid kernel basis: {0}")]
    InvalidKernelBasis(String),

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },

    #[error("schema error at {field}: {message}")]
    Schema { field: String, message: String },

    #[error("cache error: {0}")]
    Cache(String),

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
