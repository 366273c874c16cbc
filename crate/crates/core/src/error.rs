use thiserror::Error;

use crate::subsets::SubsetMask;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("ground set size {0} is outside 1..=16")]
    SizeOutOfRange(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not symmetric at entry ({0},{1})")]
    NotSymmetric(usize, usize),
    #[error("principal minor of {0} is not positive")]
    NonPositiveMinor(SubsetMask),
    #[error("principal minor of {0} is singular")]
    SingularMinor(SubsetMask),
    #[error("entry {0} is not finite")]
    NonFinite(SubsetMask),
    #[error("family point epsilon={epsilon}, a={a} is not PSD-feasible")]
    InfeasiblePoint { epsilon: f64, a: f64 },
    #[error("expected a tensor with {expected} axes, got {got}")]
    WrongArity { expected: usize, got: usize },
    #[error("zero pivot: entry ({0},{1}) vanishes")]
    ZeroPivot(usize, usize),
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("zero denominator: entry {0} vanishes")]
    ZeroDenominator(SubsetMask),
    #[error("conditions failed: {0}")]
    ConditionsFailed(String),
    #[error("matrix is not positive semidefinite (smallest eigenvalue {0:e})")]
    NotPsd(f64),
    #[error("not in the continuous region: {0}")]
    NotInContinuousRegion(String),
    #[error("functional is not balanced: element {element} sums to {sum:e}")]
    NotBalanced { element: usize, sum: f64 },
    #[error("target not reachable by the boundary construction: {0}")]
    Unreachable(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
