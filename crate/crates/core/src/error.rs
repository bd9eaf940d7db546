use thiserror::Error;

use crate::grouprings::FiniteGroupId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("operation not supported for group {0:?}")]
    UnsupportedGroup(FiniteGroupId),

    #[error("group mismatch: expected {expected:?}, found {found:?}")]
    GroupMismatch {
        expected: FiniteGroupId,
        found: FiniteGroupId,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("not a complex: composite of differentials starting in degree {degree} is nonzero")]
    NotAComplex { degree: i32 },

    #[error("invalid cohomology isomorphism: {0}")]
    InvalidIso(String),

    #[error("subgroup of order {0} is not proper; induction formula does not apply")]
    NotProperSubgroup(usize),

    #[error("decomposition group at {p} is not the full Galois group")]
    NotFullDecomposition { p: u64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("field Q(sqrt {d1}, sqrt {d2}) is not totally real; pass the override to explore it")]
    NotTotallyReal { d1: i64, d2: i64 },

    #[error("internal consistency: {0}")]
    Internal(String),

    #[error(
        "analytic check failed for conductor {conductor}: |ratio^2 - 4/f| = {error:e} >= {tol:e}"
    )]
    AnalyticCheck {
        conductor: u64,
        error: f64,
        tol: f64,
    },
}
