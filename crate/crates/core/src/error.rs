use thiserror::Error;

use crate::ring::Int;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("coefficients are not unimodular: gcd is {gcd}")]
    NotUnimodular { gcd: Int },
    #[error("need at least 2 coefficients, got {0}")]
    TooShort(usize),
    #[error("index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("indices must differ (got {0} twice)")]
    EqualIndices(usize),
    #[error("coefficient at pivot {0} is zero")]
    ZeroPivot(usize),
    #[error("vector is not a solution of the equation")]
    NotASolution,
    #[error("index set {0:?} does not generate the unit ideal")]
    NotCoprimeSubset(Vec<usize>),
    #[error("linear congruence has no solution")]
    Unsolvable,
    #[error("modulus must be nonzero")]
    ZeroModulus,
    #[error("p-part of zero is undefined")]
    ZeroPPart,
    #[error("{0} is not a prime")]
    NotPrime(Int),
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("zero diagonal entry at position {0}")]
    ZeroDiagonal(usize),
    #[error("system has no integral solution")]
    NonIntegral,
    #[error("small module is not contained in big module")]
    ContainmentViolation,
    #[error("enumeration needs {needed} candidate points, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
