use std::collections::BTreeSet;

use proptest::prelude::*;

use plp::ground::{consistent, gnd_body, hitting_sets, AtomId, AtomTable, GroundProgram, GroundRule, Lit};
use plp::inference::{disjoint_transform, ve, ve_with, VeOptions};
use plp::logic::{eval_term, Atom, Body, Literal, Term};
use plp::semantics::success_probability;
use plp::strat::TimedStratum;

const S0: TimedStratum = TimedStratum { time: 0, stratum: 0 };

fn atom(name: &str) -> Atom {
    Atom::ordinary(name, Vec::new(), Term::Int(0))
}

/// A random ground program over atoms `p0..`: the first `facts` atoms carry
/// probabilistic facts, later atoms have rules whose bodies only mention earlier atoms.
#[derive(Clone, Debug)]
struct RandomProgram {
    facts: Vec<f64>,
    rules: Vec<Vec<Vec<(usize, bool)>>>,
}

impl RandomProgram {
    fn atoms(&self) -> usize {
        self.facts.len() + self.rules.len()
    }

    fn build(&self) -> (GroundProgram, Vec<AtomId>) {
        let mut t = AtomTable::new();
        let ids: Vec<AtomId> = (0..self.atoms())
            .map(|i| t.intern(atom(&format!("p{i}")), S0))
            .collect();
        let mut rules = Vec::new();
        for (k, bodies) in self.rules.iter().enumerate() {
            let head = ids[self.facts.len() + k];
            for b in bodies {
                rules.push(GroundRule {
                    head,
                    body: b
                        .iter()
                        .map(|&(i, pos)| Lit {
                            atom: ids[i],
                            positive: pos,
                        })
                        .collect(),
                });
            }
        }
        let facts = self.facts.iter().enumerate().map(|(i, &p)| (ids[i], p)).collect();
        (GroundProgram::from_parts(t, rules, facts).unwrap(), ids)
    }
}

fn random_program() -> impl Strategy<Value = RandomProgram> {
    (1usize..6, 1usize..6).prop_flat_map(|(nf, nr)| {
        let facts = prop::collection::vec(0.05f64..0.95, nf);
        let rules: Vec<_> = (0..nr)
            .map(|k| {
                let below = nf + k;
                prop::collection::vec(prop::collection::vec((0..below, any::<bool>()), 0..4), 0..4)
            })
            .collect();
        (facts, rules).prop_map(|(facts, rules)| RandomProgram { facts, rules })
    })
}

fn with_query() -> impl Strategy<Value = (RandomProgram, Vec<(usize, bool)>)> {
    random_program().prop_flat_map(|p| {
        let n = p.atoms();
        (Just(p), prop::collection::vec((0..n, any::<bool>()), 1..4))
    })
}

fn lits(ids: &[AtomId], q: &[(usize, bool)]) -> Vec<Lit> {
    q.iter()
        .map(|&(i, pos)| Lit {
            atom: ids[i],
            positive: pos,
        })
        .collect()
}

proptest! {
    #[test]
    fn ve_agrees_with_enumeration((p, q) in with_query()) {
        let (g, ids) = p.build();
        let q = lits(&ids, &q);
        let expected = success_probability(&g, &q).unwrap();
        for cautious in [false, true] {
            let d = disjoint_transform(&g, cautious).unwrap();
            prop_assert!((ve(&d, &q) - expected).abs() < 1e-9);
        }
    }

    #[test]
    fn cache_and_pruning_are_transparent((p, q) in with_query()) {
        let (g, ids) = p.build();
        let d = disjoint_transform(&g, false).unwrap();
        let q = lits(&ids, &q);
        let base = ve(&d, &q);
        for (pruning, caching) in [(false, false), (false, true), (true, false)] {
            let opts = VeOptions { pruning, caching, ..VeOptions::default() };
            prop_assert!((ve_with(&d, &q, &opts).0 - base).abs() < 1e-9);
        }
    }

    #[test]
    fn disjoint_transform_keeps_marginals(p in random_program()) {
        let (g, ids) = p.build();
        let d = disjoint_transform(&g, false).unwrap();
        for &a in &ids {
            let before = success_probability(&g, &[Lit::pos(a)]).unwrap();
            let after = success_probability(&d, &[Lit::pos(a)]).unwrap();
            prop_assert!((before - after).abs() < 1e-9);
        }
        for (h, group) in ids.iter().map(|&h| (h, d.rules_for(h).collect::<Vec<_>>())) {
            for (i, a) in group.iter().enumerate() {
                for b in &group[i + 1..] {
                    let both: Vec<Lit> = a.body.iter().chain(&b.body).copied().collect();
                    prop_assert!(!plp::ground::lits_consistent(&d.table, &both), "bodies of {h} overlap");
                }
            }
        }
    }
}

fn brute_force_hitting_sets(family: &[Vec<u8>]) -> BTreeSet<BTreeSet<u8>> {
    let universe: Vec<u8> = family
        .iter()
        .flatten()
        .copied()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let hits = |s: &BTreeSet<u8>| family.iter().all(|f| f.iter().any(|x| s.contains(x)));
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << universe.len()) {
        let s: BTreeSet<u8> = universe
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, &x)| x)
            .collect();
        if hits(&s)
            && s.iter().all(|x| {
                let mut t = s.clone();
                t.remove(x);
                !hits(&t)
            })
        {
            out.insert(s);
        }
    }
    out
}

proptest! {
    #[test]
    fn hitting_sets_are_exactly_the_minimal_ones(family in prop::collection::vec(prop::collection::vec(0u8..7, 0..4), 0..5)) {
        let got: BTreeSet<BTreeSet<u8>> = hitting_sets(&family).into_iter().collect();
        prop_assert_eq!(got, brute_force_hitting_sets(&family));
    }
}

/// Domain `q(c)`, `r(c)` for c in {a, b, c}.
fn domain() -> Vec<Atom> {
    let mut d = Vec::new();
    for c in ["a", "b", "c"] {
        for p in ["q", "r"] {
            d.push(Atom::ordinary(p, vec![Term::constant(c)], Term::Int(0)));
        }
    }
    d
}

/// Negative body element shapes: `(pred, arg)` where `arg` is a constant or `X`/`Y`.
fn element() -> impl Strategy<Value = Vec<Atom>> {
    let arg = prop_oneof![Just("a"), Just("b"), Just("X"), Just("Y")];
    let pred = prop_oneof![Just("q"), Just("r")];
    prop::collection::vec((pred, arg), 1..3).prop_map(|v| {
        v.into_iter()
            .map(|(p, a)| {
                let t = if a.starts_with(char::is_uppercase) {
                    Term::var(a)
                } else {
                    Term::constant(a)
                };
                Atom::ordinary(p, vec![t], Term::Int(0))
            })
            .collect()
    })
}

/// Whether `I` satisfies the negation of `element`: no assignment of the element's
/// variables over the constants puts all its atoms into `I`.
fn element_holds(element: &[Atom], interp: &BTreeSet<Atom>) -> bool {
    for x in ["a", "b", "c"] {
        for y in ["a", "b", "c"] {
            let s = plp::logic::Substitution::new()
                .with("X", Term::constant(x))
                .with("Y", Term::constant(y));
            if element.iter().all(|a| interp.contains(&s.apply(a))) {
                return false;
            }
        }
    }
    true
}

proptest! {
    #[test]
    fn body_grounding_preserves_satisfaction(
        pos in prop::collection::vec(0usize..6, 0..3),
        negs in prop::collection::vec(element(), 0..3),
        mask in 0u32..64,
    ) {
        let d = domain();
        let interp: BTreeSet<Atom> = d.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, a)| a.clone()).collect();
        let body = Body { positives: pos.iter().map(|&i| d[i].clone()).collect(), negatives: negs.clone() };
        let direct = body.positives.iter().all(|a| interp.contains(a)) && negs.iter().all(|e| element_holds(e, &interp));
        let grounded = gnd_body(&body, &d).unwrap();
        let via = grounded.iter().any(|b| {
            b.positives.iter().all(|a| interp.contains(a)) && b.negatives.iter().all(|a| !interp.contains(a))
        });
        prop_assert_eq!(direct, via);
    }
}

/// Atoms `f = 0..2 @ 0`, `p @ 0`, `q @ 0`.
fn consistency_atoms() -> Vec<Atom> {
    let mut v: Vec<Atom> = (0..3)
        .map(|i| Atom::equation("f", vec![], Term::Int(i), Term::Int(0)))
        .collect();
    v.push(atom("p"));
    v.push(atom("q"));
    v
}

fn literal_set() -> impl Strategy<Value = Vec<(usize, bool)>> {
    prop::collection::vec((0usize..5, any::<bool>()), 0..4)
}

proptest! {
    #[test]
    fn consistency_matches_right_unique_models(l1 in literal_set(), l2 in literal_set()) {
        let atoms = consistency_atoms();
        let to = |v: &[(usize, bool)]| -> Vec<Literal> {
            v.iter().map(|&(i, pos)| Literal { positive: pos, atom: atoms[i].clone() }).collect()
        };
        let all: Vec<(usize, bool)> = l1.iter().chain(&l2).copied().collect();
        let has_model = (0u32..32).any(|m| {
            let right_unique = (m & 0b111).count_ones() <= 1;
            right_unique && all.iter().all(|&(i, pos)| (m >> i & 1 == 1) == pos)
        });
        prop_assert_eq!(consistent(&to(&l1), &to(&l2)), has_model);
    }
}

#[derive(Clone, Debug)]
enum Arith {
    Num(i64),
    Op(&'static str, Box<Arith>, Box<Arith>),
}

impl Arith {
    fn term(&self) -> Term {
        match self {
            Arith::Num(n) => Term::Int(*n),
            Arith::Op(op, a, b) => Term::binary(op, a.term(), b.term()),
        }
    }

    fn value(&self) -> Option<i64> {
        match self {
            Arith::Num(n) => Some(*n),
            Arith::Op(op, a, b) => {
                let (x, y) = (a.value()?, b.value()?);
                match *op {
                    "+" => x.checked_add(y),
                    "-" => x.checked_sub(y),
                    _ => x.checked_mul(y),
                }
            }
        }
    }
}

fn arith() -> impl Strategy<Value = Arith> {
    (-50i64..50).prop_map(Arith::Num).prop_recursive(4, 16, 2, |inner| {
        (prop_oneof![Just("+"), Just("-"), Just("*")], inner.clone(), inner)
            .prop_map(|(op, a, b)| Arith::Op(op, Box::new(a), Box::new(b)))
    })
}

proptest! {
    #[test]
    fn evaluation_is_idempotent_and_exact(e in arith()) {
        let t = e.term();
        let v = eval_term(&t).unwrap();
        prop_assert_eq!(&v, &Term::Int(e.value().unwrap()));
        prop_assert_eq!(eval_term(&v).unwrap(), v);
    }
}
