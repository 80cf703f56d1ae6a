use alloc::string::String;
use alloc::vec::Vec;
use num_complex::Complex64;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("parts must be weakly decreasing")]
    NotAPartition,
    #[error("weight entries must be weakly decreasing")]
    NotAWeight,
    #[error("cycle type must be nonempty with every part at least 2")]
    NotACycleType,
    #[error("length {length} exceeds rank r = {r}")]
    LengthExceedsRank { length: usize, r: usize },
    #[error("cycle type of size {size} does not fit in {n} elements")]
    CycleTooLarge { size: usize, n: usize },
    #[error("weight has {got} entries, expected {expected}")]
    RankMismatch { expected: usize, got: usize },
    #[error("character evaluation is ill-conditioned at these eigenvalues")]
    IllConditioned,
    #[error("slot indices ({i}, {j}) invalid for n = {n}; need 1 <= i < j <= n")]
    SlotOutOfRange { i: usize, j: usize, n: usize },
    #[error("not a permutation of 1..={n}")]
    NotAPermutation { n: usize },
    #[error("tensor dimension r^n = {dim} exceeds the dense limit {limit}")]
    SizeGuard { dim: u128, limit: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("operation not available for this model kind: {0}")]
    WrongKind(&'static str),
    #[error("operator shapes do not match")]
    ShapeMismatch,
    #[error("operator is not symmetric")]
    NotSymmetric,
    #[error("partition function underflowed")]
    Underflow,
    #[error("optimizer did not converge: {0}")]
    NoConvergence(&'static str),
    #[error("quadratic form is negative semidefinite, no transition")]
    NegativeSemidefinite,
    #[error("no sign change of the transition predicate in [{lower}, {upper}]")]
    BracketFailure { lower: f64, upper: f64 },
    #[error("maximizer is not unique ({} candidates)", candidates.len())]
    NonUniqueMaximizer { candidates: Vec<Complex64> },
    #[error("point lies on the boundary of D, where the magnetisation jumps")]
    OnBoundary,
}
