//! Path construction between two stabilizer codes.

mod blocks;
mod constrained;
mod diag;
mod plan;

use thiserror::Error;

use crate::code::CodeError;

pub use blocks::{align_shared_signs, decompose_blocks, AnticommutingPair, BlockDecomposition, ComplementPair, DecomposeOptions};
pub use constrained::{constrained_path_search, ConstraintSet, SearchOutcome};
pub use diag::{connectivity_matrix, diagonalize, replay, Diagonalization, GenOp};
pub use plan::{build_plan, decompose_with, pad_to_match, plan_between, MeasurementStep, PlanOptions, Reduction, RewirePlan};

#[derive(Debug, Error)]
pub enum PlanError {
    #[error("size mismatch: {0}")]
    SizeMismatch(String),
    #[error("codes encode different numbers of logical qubits ({0} vs {1})")]
    LogicalMismatch(usize, usize),
    #[error("shared stabilizer {0} has opposite signs in the two codes")]
    SignConflict(String),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error("instance too large for exhaustive search: {0}")]
    Guard(String),
    #[error("plan file line {line}: {reason}")]
    Format { line: usize, reason: String },
    #[error("internal invariant violated: {0}")]
    Internal(String),
}
