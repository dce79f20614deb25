use std::collections::BTreeSet;

use rustc_hash::FxHashMap;

use crate::logic::{Atom, Literal, Term};

/// Whether two sets of ground literals can hold together under right-unique equations:
/// false iff their union contains an atom and its negation, or two positive equations
/// with the same left-hand side and time but different right-hand sides.
pub fn consistent(b1: &[Literal], b2: &[Literal]) -> bool {
    let mut signs: FxHashMap<&Atom, bool> = FxHashMap::default();
    let mut eqs: FxHashMap<(&str, &[Term], &Term), &Term> = FxHashMap::default();
    for l in b1.iter().chain(b2) {
        if let Some(&s) = signs.get(&l.atom) {
            if s != l.positive {
                return false;
            }
        }
        signs.insert(&l.atom, l.positive);
        if let (true, Atom::Equation { func, args, rhs, time }) = (l.positive, &l.atom) {
            match eqs.get(&(&**func, args.as_slice(), time)) {
                Some(&other) if other != rhs => return false,
                _ => {
                    eqs.insert((func, args, time), rhs);
                }
            }
        }
    }
    true
}

/// Goal regression of a query over ground normal rules `(head, body)`: repeatedly add,
/// for each positive literal `a`, the literals common to all bodies of the rules for `a`.
/// Atoms without rules contribute nothing. Returns the fixpoint, starting with `q`.
pub fn regress(q: &[Literal], rules: &[(Atom, Vec<Literal>)]) -> Vec<Literal> {
    let mut by_head: FxHashMap<&Atom, Vec<&Vec<Literal>>> = FxHashMap::default();
    for (h, b) in rules {
        by_head.entry(h).or_default().push(b);
    }
    let mut out: Vec<Literal> = Vec::new();
    let mut seen: BTreeSet<Literal> = BTreeSet::new();
    for l in q {
        if seen.insert(l.clone()) {
            out.push(l.clone());
        }
    }
    let mut i = 0;
    while i < out.len() {
        let l = out[i].clone();
        i += 1;
        if !l.positive {
            continue;
        }
        let Some(bodies) = by_head.get(&l.atom) else { continue };
        let mut common: Vec<Literal> = bodies[0].clone();
        for b in &bodies[1..] {
            common.retain(|x| b.contains(x));
        }
        for x in common {
            if seen.insert(x.clone()) {
                out.push(x);
            }
        }
    }
    out
}
