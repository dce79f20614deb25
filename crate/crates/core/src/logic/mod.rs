//! Terms, atoms and rules; substitutions, matching against ground atoms, and evaluation
//! of interpreted terms and built-in atoms.

mod atom;
mod eval;
mod matching;
mod rule;
mod subst;
mod term;

pub use atom::{Atom, Cmp, Literal, PredSig};
pub use eval::{eval_atom, eval_builtin, eval_builtin_atom, eval_term, EvalError};
pub use matching::{match_atom, match_atom_into};
pub use rule::{Body, Head, Rule};
pub use subst::{Substitutable, Substitution};
pub use term::{is_interpreted, sym, Sym, Term};
