use std::collections::BTreeSet;

use crate::logic::{eval_atom, eval_builtin_atom, Atom, Body, Substitution};
use crate::strat::TimedStratum;

use super::hitting::hitting_sets;
use super::matcher::{DomainIndex, Matcher};
use super::table::{AtomId, AtomTable, Lit};
use super::GroundError;

/// A ground body whose negative elements are all single atoms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct NormalBody {
    pub positives: Vec<Atom>,
    pub negatives: Vec<Atom>,
}

/// Replace the negative elements of a body by negative literals over the domain seen by
/// `matcher`. `positives` are the already ground positive literals. Returns every
/// resulting body, simplified: duplicates dropped, complementary bodies discarded.
pub(crate) fn ground_negatives(
    matcher: &Matcher<'_>,
    positives: &[Lit],
    negatives: &[Vec<Atom>],
) -> Result<Vec<Vec<Lit>>, GroundError> {
    let mut bodies: Vec<Vec<Lit>> = vec![positives.to_vec()];
    for element in negatives {
        let matches = matcher.solve(element, Substitution::new())?;
        let family: Vec<Vec<AtomId>> = matches.into_iter().map(|m| m.atoms).collect();
        let hits = hitting_sets(&family);
        if hits.is_empty() {
            return Ok(Vec::new());
        }
        let mut next = Vec::with_capacity(bodies.len() * hits.len());
        for b in &bodies {
            for h in &hits {
                let mut nb = b.clone();
                nb.extend(h.iter().map(|&a| Lit::neg(a)));
                next.push(nb);
            }
        }
        bodies = next;
    }
    let mut out = Vec::with_capacity(bodies.len());
    let mut seen = BTreeSet::new();
    for b in bodies {
        if let Some(b) = simplify(b) {
            let mut key = b.clone();
            key.sort();
            if seen.insert(key) {
                out.push(b);
            }
        }
    }
    Ok(out)
}

/// Drop duplicate literals, keeping first occurrences; `None` if the body contains
/// an atom and its negation.
pub(crate) fn simplify(body: Vec<Lit>) -> Option<Vec<Lit>> {
    let mut seen: BTreeSet<Lit> = BTreeSet::new();
    let mut out = Vec::with_capacity(body.len());
    for l in body {
        if seen.contains(&l.negate()) {
            return None;
        }
        if seen.insert(l) {
            out.push(l);
        }
    }
    Some(out)
}

/// Body grounding over an explicit domain. The positive part of `body` must be ground;
/// negative elements may contain further, implicitly existential variables.
pub fn gnd_body(body: &Body, domain: &[Atom]) -> Result<Vec<NormalBody>, GroundError> {
    let mut table = AtomTable::new();
    let mut index = DomainIndex::new();
    let s0 = TimedStratum { time: 0, stratum: 0 };
    for a in domain {
        let a = eval_atom(a)?;
        if table.get(&a).is_none() {
            let id = table.intern(a, s0);
            index.insert(&table, id);
        }
    }
    let in_domain = table.len() as AtomId;
    let mut positives = Vec::new();
    for a in &body.positives {
        if !a.is_ground() {
            return Err(GroundError::NonGroundQuery(a.to_string()));
        }
        if a.is_builtin() {
            if !eval_builtin_atom(a)? {
                return Ok(Vec::new());
            }
            continue;
        }
        positives.push(Lit::pos(table.intern(eval_atom(a)?, s0)));
    }
    let accept = |id: AtomId| id < in_domain;
    let matcher = Matcher {
        table: &table,
        index: &index,
        accept: &accept,
    };
    let bodies = ground_negatives(&matcher, &positives, &body.negatives)?;
    Ok(bodies
        .into_iter()
        .map(|b| {
            let (pos, neg): (Vec<Lit>, Vec<Lit>) = b.into_iter().partition(|l| l.positive);
            NormalBody {
                positives: pos.iter().map(|l| table.atom(l.atom).clone()).collect(),
                negatives: neg.iter().map(|l| table.atom(l.atom).clone()).collect(),
            }
        })
        .collect())
}
