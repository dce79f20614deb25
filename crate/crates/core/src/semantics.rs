//! Reference implementation of the distribution semantics over ground programs: every
//! choice of probabilistic facts induces a least model, and a query's success
//! probability is the total weight of the choices whose model satisfies it.
//!
//! Exponential in the number of relevant probabilistic facts; meant for checking.

use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::ground::{AtomId, GroundProgram, Lit};

/// Most probabilistic facts [`success_probability`] will enumerate.
pub const MAX_FACTS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SemanticsError {
    #[error("{0} relevant probabilistic facts exceed the enumeration limit of {MAX_FACTS}")]
    TooManyFacts(usize),
}

/// Selected probabilistic facts, by position in `GroundProgram::prob_facts`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Choice {
    pub selected: Vec<bool>,
}

impl Choice {
    pub fn none(g: &GroundProgram) -> Choice {
        Choice {
            selected: vec![false; g.prob_facts.len()],
        }
    }

    pub fn all(g: &GroundProgram) -> Choice {
        Choice {
            selected: vec![true; g.prob_facts.len()],
        }
    }

    pub fn probability(&self, g: &GroundProgram) -> f64 {
        g.prob_facts
            .iter()
            .zip(&self.selected)
            .map(|(&(_, p), &s)| if s { p } else { 1.0 - p })
            .product()
    }
}

/// Truth values of all atoms of a ground program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Model {
    truth: Vec<bool>,
}

impl Model {
    pub fn contains(&self, a: AtomId) -> bool {
        self.truth.get(a as usize).copied().unwrap_or(false)
    }

    pub fn atoms(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.truth
            .iter()
            .enumerate()
            .filter(|(_, &t)| t)
            .map(|(i, _)| i as AtomId)
    }

    pub fn satisfies(&self, lits: &[Lit]) -> bool {
        lits.iter().all(|l| self.contains(l.atom) == l.positive)
    }
}

/// Atoms in dependency order (bodies before heads).
pub fn ground_order(g: &GroundProgram) -> Vec<AtomId> {
    let mut order: Vec<AtomId> = g.table.ids().collect();
    order.sort_by_key(|&a| g.rank(a));
    order
}

/// Least model of the normal rules plus the chosen facts.
pub fn lfp_model(g: &GroundProgram, choice: &Choice) -> Model {
    lfp_model_with_order(g, choice, &ground_order(g))
}

/// As [`lfp_model`], evaluating atoms in `order`, which must list every atom after the
/// atoms its rules depend on.
pub fn lfp_model_with_order(g: &GroundProgram, choice: &Choice, order: &[AtomId]) -> Model {
    let mut truth = vec![false; g.table.len()];
    for (&(a, _), &s) in g.prob_facts.iter().zip(&choice.selected) {
        if s {
            truth[a as usize] = true;
        }
    }
    for &a in order {
        if truth[a as usize] {
            continue;
        }
        truth[a as usize] = g
            .rules_for(a)
            .any(|r| r.body.iter().all(|l| truth[l.atom as usize] == l.positive));
    }
    Model { truth }
}

/// No two true equations share left-hand side and time.
pub fn check_right_uniqueness(g: &GroundProgram, m: &Model) -> bool {
    let mut seen: FxHashMap<u32, AtomId> = FxHashMap::default();
    for a in m.atoms() {
        if let Some(k) = g.table.eq_key(a) {
            if seen.insert(k, a).is_some() {
                return false;
            }
        }
    }
    true
}

/// Atoms the query literals depend on, in dependency order.
fn cone(g: &GroundProgram, q: &[Lit]) -> Vec<AtomId> {
    let mut mark = vec![false; g.table.len()];
    let mut stack: Vec<AtomId> = q.iter().map(|l| l.atom).collect();
    let mut out = Vec::new();
    while let Some(a) = stack.pop() {
        if std::mem::replace(&mut mark[a as usize], true) {
            continue;
        }
        out.push(a);
        for r in g.rules_for(a) {
            stack.extend(r.body.iter().map(|l| l.atom));
        }
    }
    out.sort_by_key(|&a| g.rank(a));
    out
}

/// Success probability of a conjunction of ground literals, by enumerating the choices
/// of the probabilistic facts the query depends on.
pub fn success_probability(g: &GroundProgram, q: &[Lit]) -> Result<f64, SemanticsError> {
    let atoms = cone(g, q);
    let facts: Vec<(AtomId, f64)> = g
        .prob_facts
        .iter()
        .copied()
        .filter(|(a, _)| atoms.binary_search_by_key(&g.rank(*a), |&b| g.rank(b)).is_ok())
        .collect();
    if facts.len() > MAX_FACTS {
        return Err(SemanticsError::TooManyFacts(facts.len()));
    }
    let rules: Vec<Vec<&[Lit]>> = atoms
        .iter()
        .map(|&a| g.rules_for(a).map(|r| r.body.as_slice()).collect())
        .collect();
    let mut truth = vec![false; g.table.len()];
    let mut total = 0.0;
    for mask in 0u64..(1u64 << facts.len()) {
        for &a in &atoms {
            truth[a as usize] = false;
        }
        let mut weight = 1.0;
        for (i, &(a, p)) in facts.iter().enumerate() {
            if mask >> i & 1 == 1 {
                truth[a as usize] = true;
                weight *= p;
            } else {
                weight *= 1.0 - p;
            }
        }
        for (k, &a) in atoms.iter().enumerate() {
            if !truth[a as usize] {
                truth[a as usize] = rules[k]
                    .iter()
                    .any(|body| body.iter().all(|l| truth[l.atom as usize] == l.positive));
            }
        }
        if q.iter().all(|l| truth[l.atom as usize] == l.positive) {
            total += weight;
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::{AtomTable, GroundRule};
    use crate::logic::{Atom, Term};
    use crate::strat::TimedStratum;

    fn setup(names: &[&str]) -> (AtomTable, Vec<AtomId>) {
        let mut t = AtomTable::new();
        let ids = names
            .iter()
            .map(|n| {
                t.intern(
                    Atom::ordinary(n, vec![], Term::Int(0)),
                    TimedStratum { time: 0, stratum: 0 },
                )
            })
            .collect();
        (t, ids)
    }

    #[test]
    fn negation_over_absent_fact() {
        let (t, ids) = setup(&["p", "a"]);
        let g = GroundProgram::from_parts(
            t,
            vec![GroundRule {
                head: ids[1],
                body: vec![Lit::neg(ids[0])],
            }],
            vec![(ids[0], 0.5)],
        )
        .unwrap();
        let m = lfp_model(&g, &Choice::none(&g));
        assert_eq!(m.atoms().collect::<Vec<_>>(), vec![ids[1]]);
        let m = lfp_model(&g, &Choice::all(&g));
        assert_eq!(m.atoms().collect::<Vec<_>>(), vec![ids[0]]);
        assert_eq!(success_probability(&g, &[]).unwrap(), 1.0);
        assert_eq!(success_probability(&g, &[Lit::pos(ids[1])]).unwrap(), 0.5);
        assert_eq!(
            success_probability(&g, &[Lit::pos(ids[1]), Lit::neg(ids[1])]).unwrap(),
            0.0
        );
    }

    #[test]
    fn right_uniqueness() {
        let mut t = AtomTable::new();
        let s0 = TimedStratum { time: 0, stratum: 0 };
        let fab = t.intern(
            Atom::equation("f", vec![Term::constant("a")], Term::constant("b"), Term::Int(0)),
            s0,
        );
        let fac = t.intern(
            Atom::equation("f", vec![Term::constant("a")], Term::constant("c"), Term::Int(0)),
            s0,
        );
        let g = GroundProgram::from_parts(
            t,
            vec![
                GroundRule {
                    head: fab,
                    body: vec![],
                },
                GroundRule {
                    head: fac,
                    body: vec![],
                },
            ],
            vec![],
        )
        .unwrap();
        assert!(!check_right_uniqueness(&g, &lfp_model(&g, &Choice::none(&g))));
    }
}
