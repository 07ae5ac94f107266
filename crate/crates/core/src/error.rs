use thiserror::Error;

use crate::greedy::Violation;
use crate::hierarchy::HierarchyError;
use crate::loss::LossError;
use crate::stats::StatsError;

/// Errors from the prediction routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error(transparent)]
    Hierarchy(#[from] HierarchyError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Loss(#[from] LossError),
    #[error("hierarchy violates the descent assumptions: {0}")]
    AssumptionsViolated(Violation<f64>),
}
