//! Exact inference on ground programs and conditional query answering.

mod disjoint;
mod query;
mod ve;

use thiserror::Error;

use crate::ground::GroundError;
use crate::logic::EvalError;
use crate::semantics::SemanticsError;

pub use disjoint::disjoint_transform;
pub use query::{
    answer_conditional, default_eot, format_answer, format_prob, Answer, QueryOptions, QueryReport, StageInfo,
};
pub use ve::{ve, ve_with, VeOptions, VeStats};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum InferenceError {
    #[error(transparent)]
    Ground(#[from] GroundError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("evidence {0} has probability 0")]
    ZeroEvidence(String),
    #[error("variable elimination gave up after {0} expansions")]
    BudgetExhausted(u64),
}
