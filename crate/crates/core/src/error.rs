use num_bigint::BigUint;

use crate::numerics::Rat;

/// Errors raised by every fallible operation in the crate.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// The requested point set would exceed the configured point budget.
    #[error("point budget exceeded: {requested} points requested, budget is {budget}")]
    PointBudget { requested: BigUint, budget: u64 },

    /// The box search examined more candidates than allowed. `best` is a
    /// certified lower bound on the dispersion.
    #[error("search budget of {budget} boxes exceeded after {examined} boxes; best volume so far is {best}")]
    SearchBudget {
        budget: u64,
        examined: u64,
        best: Rat,
    },

    /// Two certified values still overlap at the precision ceiling.
    #[error("comparison indeterminate at the precision ceiling of {bits} bits")]
    Indeterminate { bits: u32 },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures caused by a resource limit rather than bad input.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            Error::PointBudget { .. } | Error::SearchBudget { .. } | Error::Indeterminate { .. }
        )
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
