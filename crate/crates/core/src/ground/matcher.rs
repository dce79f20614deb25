use std::collections::BTreeSet;

use rustc_hash::FxHashMap;

use crate::logic::{
    eval_builtin, eval_term, match_atom_into, Atom, Cmp, PredSig, Substitutable, Substitution, Sym, Term,
};

use super::table::{AtomId, AtomTable};
use super::GroundError;

/// Lookup of ground atoms by signature and time.
#[derive(Clone, Debug, Default)]
pub struct DomainIndex {
    by_time: FxHashMap<(PredSig, i64), Vec<AtomId>>,
    by_sig: FxHashMap<PredSig, Vec<AtomId>>,
}

impl DomainIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, table: &AtomTable, id: AtomId) {
        let sig = table.signature(id);
        let time = table.atom(id).time_value().expect("interned atoms have integer times");
        self.by_time.entry((sig.clone(), time)).or_default().push(id);
        self.by_sig.entry(sig).or_default().push(id);
    }

    fn candidates(&self, sig: &PredSig, time: Option<i64>) -> &[AtomId] {
        let found = match time {
            Some(t) => self.by_time.get(&(sig.clone(), t)),
            None => self.by_sig.get(sig),
        };
        found.map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Enumerates matchers of a conjunction of atoms (ordinary, equations, built-ins) to the
/// atoms of an index accepted by a filter.
pub struct Matcher<'a> {
    pub table: &'a AtomTable,
    pub index: &'a DomainIndex,
    pub accept: &'a dyn Fn(AtomId) -> bool,
}

/// A matcher together with the ids of the matched ordinary atoms, in conjunct order.
#[derive(Clone, Debug)]
pub struct Match {
    pub subst: Substitution,
    pub atoms: Vec<AtomId>,
}

fn interpreted_vars(t: &Term, out: &mut BTreeSet<Sym>) {
    match t {
        Term::App(..) | Term::Range(..) if t.is_interpreted_app() || matches!(t, Term::Range(..)) => {
            t.collect_vars(out)
        }
        Term::App(_, args) | Term::List(args) => args.iter().for_each(|a| interpreted_vars(a, out)),
        _ => {}
    }
}

/// Variables that must be bound before `a` can be matched (those inside interpreted terms).
fn blocking_vars(a: &Atom) -> BTreeSet<Sym> {
    let mut out = BTreeSet::new();
    match a {
        Atom::Ordinary { args, time, .. } => {
            args.iter().for_each(|t| interpreted_vars(t, &mut out));
            interpreted_vars(time, &mut out);
        }
        Atom::Equation { args, rhs, time, .. } => {
            args.iter().for_each(|t| interpreted_vars(t, &mut out));
            interpreted_vars(rhs, &mut out);
            interpreted_vars(time, &mut out);
        }
        Atom::Builtin { .. } => {}
    }
    out
}

impl Matcher<'_> {
    /// All matchers of `conj` extending `init`, in a deterministic order.
    pub fn solve(&self, conj: &[Atom], init: Substitution) -> Result<Vec<Match>, GroundError> {
        let mut out = Vec::new();
        let pending: Vec<Atom> = conj.iter().map(|a| a.apply_subst(&init)).collect();
        let mut slots = vec![None; conj.len()];
        self.step(pending, (0..conj.len()).collect(), init, &mut slots, &mut out)?;
        Ok(out)
    }

    fn step(
        &self,
        pending: Vec<Atom>,
        positions: Vec<usize>,
        subst: Substitution,
        slots: &mut Vec<Option<AtomId>>,
        out: &mut Vec<Match>,
    ) -> Result<(), GroundError> {
        let mut pending = pending;
        let mut positions = positions;
        let mut subst = subst;
        // Evaluate ground built-ins; `X = t` with ground `t` binds X.
        loop {
            let mut progress = false;
            let mut i = 0;
            while i < pending.len() {
                if let Atom::Builtin { op, lhs, rhs } = &pending[i] {
                    if lhs.is_ground() && rhs.is_ground() {
                        if !eval_builtin(*op, lhs, rhs)? {
                            return Ok(());
                        }
                        pending.remove(i);
                        positions.remove(i);
                        progress = true;
                        continue;
                    }
                    if *op == Cmp::Eq {
                        let bind = match (lhs, rhs) {
                            (Term::Var(v), t) | (t, Term::Var(v)) if t.is_ground() => Some((v.clone(), eval_term(t)?)),
                            _ => None,
                        };
                        if let Some((v, value)) = bind {
                            subst.bind(v.clone(), value.clone());
                            let one = Substitution::new().with(&v, value);
                            pending = pending.iter().map(|a| a.apply_subst(&one)).collect();
                            pending.remove(i);
                            positions.remove(i);
                            progress = true;
                            continue;
                        }
                    }
                }
                i += 1;
            }
            if !progress {
                break;
            }
        }

        let ordinary: Vec<usize> = (0..pending.len()).filter(|&i| !pending[i].is_builtin()).collect();
        if ordinary.is_empty() {
            if let Some(b) = pending.first() {
                return Err(GroundError::Unsupported(format!("built-in {b} has unbound variables")));
            }
            out.push(Match {
                subst,
                atoms: slots.iter().flatten().copied().collect(),
            });
            return Ok(());
        }

        // Next conjunct: matchable now, preferring a ground time and more ground arguments.
        let choice = ordinary
            .iter()
            .copied()
            .filter(|&i| blocking_vars(&pending[i]).is_empty())
            .max_by_key(|&i| {
                let a = &pending[i];
                let ground_time = a.time().is_some_and(Term::is_ground);
                let vars = a.vars().len();
                (ground_time, std::cmp::Reverse(vars), std::cmp::Reverse(i))
            });
        let Some(i) = choice else {
            return Err(GroundError::Unsupported(format!(
                "cannot match {}: variables inside interpreted terms are never bound",
                pending[ordinary[0]]
            )));
        };

        let pattern = pending.remove(i);
        let pos = positions.remove(i);
        let sig = pattern.signature().unwrap();
        let time = match pattern.time() {
            Some(t) if t.is_ground() => match eval_term(t)? {
                Term::Int(v) => Some(v),
                other => {
                    return Err(GroundError::Eval(crate::logic::EvalError::IllSorted(format!(
                        "time term {other}"
                    ))))
                }
            },
            _ => None,
        };
        for &id in self.index.candidates(&sig, time) {
            if !(self.accept)(id) {
                continue;
            }
            let mut s = subst.clone();
            if !match_atom_into(&pattern, self.table.atom(id), &mut s) {
                continue;
            }
            let delta = Substitution::from_new(&subst, &s);
            let rest: Vec<Atom> = pending.iter().map(|a| a.apply_subst(&delta)).collect();
            slots[pos] = Some(id);
            self.step(rest, positions.clone(), s, slots, out)?;
            slots[pos] = None;
        }
        Ok(())
    }
}

impl Substitution {
    /// The bindings of `after` that are not in `before`.
    pub(crate) fn from_new(before: &Substitution, after: &Substitution) -> Substitution {
        let mut d = Substitution::new();
        for (k, v) in after.iter() {
            if before.get(k).is_none() {
                d.bind(k.clone(), v.clone());
            }
        }
        d
    }
}
