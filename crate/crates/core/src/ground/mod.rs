//! Bottom-up grounding into normal ground programs, guided by a query.

mod body;
mod engine;
mod hitting;
mod matcher;
mod normal;
mod program;
mod regress;
mod table;

use thiserror::Error;

use crate::logic::EvalError;
use crate::strat::StratError;

pub(crate) use body::ground_negatives;
pub use body::{gnd_body, NormalBody};
pub use engine::{ground, GroundOptions};
pub use hitting::hitting_sets;
pub use matcher::{DomainIndex, Match, Matcher};
pub use normal::{normalize, sum_cases, AuxNames, NormalItem};
pub use program::{GroundProgram, GroundRule, StratumStats};
pub use regress::{consistent, regress};
pub use table::{lits_consistent, sorted_lits_consistent, AtomId, AtomTable, Lit, LitSet};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroundError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Strat(#[from] StratError),
    #[error("bad probability: {0}")]
    BadProbability(String),
    #[error("ground program has a positive cycle through {{{}}}", .0.join(", "))]
    PositiveCycle(Vec<String>),
    #[error("ground program is not stratified: cycle through negation among {{{}}}", .0.join(", "))]
    NotStratified(Vec<String>),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("query literal {0} is not ground")]
    NonGroundQuery(String),
}
