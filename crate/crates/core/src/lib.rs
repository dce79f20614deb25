//! Probabilistic logic programs with stratified negation, time-indexed atoms and
//! distribution heads: parsing, bottom-up query-guided grounding, and exact inference.
//!
//! The pipeline is [`parser`] → [`Program`] (time-constraint and stratification checks in
//! [`strat`]) → [`ground`] (normal ground programs) → [`inference`] (variable elimination
//! and conditional query answering). [`semantics`] is a brute-force reference
//! implementation of the distribution semantics used to check the fast paths.

pub mod bench;
pub mod ground;
pub mod inference;
pub mod logic;
pub mod parser;
mod program;
pub mod semantics;
pub mod strat;

use thiserror::Error;

pub use program::{rule_stratum, Program};

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(#[from] parser::ParseError),
    #[error(transparent)]
    Strat(#[from] strat::StratError),
    #[error(transparent)]
    Ground(#[from] ground::GroundError),
    #[error(transparent)]
    Eval(#[from] logic::EvalError),
    #[error(transparent)]
    Inference(#[from] inference::InferenceError),
    #[error(transparent)]
    Semantics(#[from] semantics::SemanticsError),
}
