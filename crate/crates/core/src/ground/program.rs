use std::collections::BTreeMap;
use std::fmt;

use rustc_hash::FxHashMap;

use crate::logic::{eval_atom, eval_builtin_atom, Atom, Literal};
use crate::strat::TimedStratum;

use super::table::{AtomId, AtomTable, Lit};
use super::GroundError;

/// A ground normal rule with probability 1. An empty body makes it a fact.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroundRule {
    pub head: AtomId,
    pub body: Vec<Lit>,
}

/// Counts for one timed stratum, by the timed stratum of the head.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StratumStats {
    pub rules: usize,
    pub prob_facts: usize,
    pub domain: usize,
}

/// Normal rules plus probabilistic facts over an atom table, with the ground dependency
/// order precomputed. Probabilistic facts have pairwise distinct atoms that head no rule.
#[derive(Clone, Debug)]
pub struct GroundProgram {
    pub table: AtomTable,
    pub rules: Vec<GroundRule>,
    pub prob_facts: Vec<(AtomId, f64)>,
    rules_by_head: FxHashMap<AtomId, Vec<usize>>,
    prob_of: FxHashMap<AtomId, f64>,
    rank: Vec<u32>,
    next_rank: u32,
}

impl GroundProgram {
    /// Assemble a program. An atom carrying a probabilistic fact that also heads a rule or
    /// another probabilistic fact is split off into a fresh fact atom plus a rule, so that
    /// probabilistic facts stay independent. Fails on cycles in the ground dependency graph.
    pub fn from_parts(
        mut table: AtomTable,
        mut rules: Vec<GroundRule>,
        prob_facts: Vec<(AtomId, f64)>,
    ) -> Result<GroundProgram, GroundError> {
        let mut fact_count: FxHashMap<AtomId, usize> = FxHashMap::default();
        for (a, _) in &prob_facts {
            *fact_count.entry(*a).or_default() += 1;
        }
        let mut heads: FxHashMap<AtomId, usize> = FxHashMap::default();
        for r in &rules {
            *heads.entry(r.head).or_default() += 1;
        }
        let mut facts = Vec::with_capacity(prob_facts.len());
        for (k, (a, p)) in prob_facts.into_iter().enumerate() {
            if fact_count[&a] > 1 || heads.contains_key(&a) {
                let time = table.atom(a).time().cloned().expect("timed atom");
                let fresh = Atom::ordinary(&format!("$pf{a}_{k}"), Vec::new(), time);
                let id = table.intern(fresh, table.strat(a));
                rules.push(GroundRule {
                    head: a,
                    body: vec![Lit::pos(id)],
                });
                facts.push((id, p));
            } else {
                facts.push((a, p));
            }
        }
        let mut rules_by_head: FxHashMap<AtomId, Vec<usize>> = FxHashMap::default();
        for (i, r) in rules.iter().enumerate() {
            rules_by_head.entry(r.head).or_default().push(i);
        }
        let prob_of = facts.iter().copied().collect();
        let rank = compute_rank(&table, &rules, &rules_by_head)?;
        let next_rank = rank.len() as u32;
        Ok(GroundProgram {
            table,
            rules,
            prob_facts: facts,
            rules_by_head,
            prob_of,
            rank,
            next_rank,
        })
    }

    pub fn rules_for(&self, a: AtomId) -> impl Iterator<Item = &GroundRule> {
        self.rules_by_head
            .get(&a)
            .into_iter()
            .flatten()
            .map(move |&i| &self.rules[i])
    }

    pub fn has_rules(&self, a: AtomId) -> bool {
        self.rules_by_head.contains_key(&a)
    }

    pub fn prob(&self, a: AtomId) -> Option<f64> {
        self.prob_of.get(&a).copied()
    }

    /// Position in the ground dependency order: body atoms rank below their heads.
    pub fn rank(&self, a: AtomId) -> u32 {
        self.rank[a as usize]
    }

    pub fn lookup(&self, a: &Atom) -> Option<AtomId> {
        self.table.get(a)
    }

    /// Id of `a`, adding it (without rules, hence false) if it is not yet known.
    pub fn intern(&mut self, a: Atom, strat: TimedStratum) -> AtomId {
        if let Some(id) = self.table.get(&a) {
            return id;
        }
        let id = self.table.intern(a, strat);
        self.rank.push(self.next_rank);
        self.next_rank += 1;
        id
    }

    /// Map ground query literals to literals of this program. Atoms the program does not
    /// know are added without rules, so they are false. Built-ins are evaluated: true ones
    /// are dropped, and a false one makes the whole query unsatisfiable (`None`).
    pub fn query_lits(&mut self, lits: &[Literal]) -> Result<Option<Vec<Lit>>, GroundError> {
        let mut out = Vec::with_capacity(lits.len());
        for l in lits {
            if !l.atom.is_ground() {
                return Err(GroundError::NonGroundQuery(l.atom.to_string()));
            }
            if l.atom.is_builtin() {
                if eval_builtin_atom(&l.atom)? != l.positive {
                    return Ok(None);
                }
                continue;
            }
            let a = eval_atom(&l.atom)?;
            let strat = TimedStratum {
                time: a.time_value().unwrap_or(0),
                stratum: usize::MAX,
            };
            let id = self.intern(a, strat);
            out.push(Lit {
                atom: id,
                positive: l.positive,
            });
        }
        Ok(Some(out))
    }

    /// Atoms heading a rule or probabilistic fact, in id order.
    pub fn domain(&self) -> Vec<AtomId> {
        let mut d: Vec<AtomId> = self.rules_by_head.keys().chain(self.prob_of.keys()).copied().collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Number of normal rules plus probabilistic facts.
    pub fn size(&self) -> usize {
        self.rules.len() + self.prob_facts.len()
    }

    /// Rules, probabilistic facts and domain atoms per timed stratum of the head.
    pub fn stats(&self) -> BTreeMap<TimedStratum, StratumStats> {
        let mut out: BTreeMap<TimedStratum, StratumStats> = BTreeMap::new();
        for r in &self.rules {
            out.entry(self.table.strat(r.head)).or_default().rules += 1;
        }
        for (a, _) in &self.prob_facts {
            out.entry(self.table.strat(*a)).or_default().prob_facts += 1;
        }
        for a in self.domain() {
            out.entry(self.table.strat(a)).or_default().domain += 1;
        }
        out
    }

    /// A copy with additional rules.
    pub fn with_rules(&self, extra: Vec<GroundRule>) -> Result<GroundProgram, GroundError> {
        let mut rules = self.rules.clone();
        rules.extend(extra);
        GroundProgram::from_parts(self.table.clone(), rules, self.prob_facts.clone())
    }
}

fn compute_rank(
    table: &AtomTable,
    rules: &[GroundRule],
    rules_by_head: &FxHashMap<AtomId, Vec<usize>>,
) -> Result<Vec<u32>, GroundError> {
    const NEW: u8 = 0;
    const OPEN: u8 = 1;
    const DONE: u8 = 2;
    let n = table.len();
    let deps = |a: AtomId| -> Vec<Lit> {
        rules_by_head
            .get(&a)
            .into_iter()
            .flatten()
            .flat_map(|&i| rules[i].body.iter().copied())
            .collect()
    };
    let mut rank = vec![0u32; n];
    let mut state = vec![NEW; n];
    let mut roots: Vec<AtomId> = table.ids().collect();
    roots.sort_by_key(|&a| (table.strat(a), a));
    let mut next = 0u32;
    for root in roots {
        if state[root as usize] != NEW {
            continue;
        }
        state[root as usize] = OPEN;
        let mut stack: Vec<(AtomId, Vec<Lit>, usize)> = vec![(root, deps(root), 0)];
        while let Some(top) = stack.last_mut() {
            if top.2 < top.1.len() {
                let l = top.1[top.2];
                top.2 += 1;
                match state[l.atom as usize] {
                    NEW => {
                        state[l.atom as usize] = OPEN;
                        stack.push((l.atom, deps(l.atom), 0));
                    }
                    OPEN => {
                        let k = stack.iter().position(|f| f.0 == l.atom).unwrap();
                        let all_positive =
                            l.positive && stack[k..stack.len() - 1].iter().all(|f| f.1[f.2 - 1].positive);
                        let names: Vec<String> = stack[k..].iter().map(|f| table.atom(f.0).to_string()).collect();
                        return Err(if all_positive {
                            GroundError::PositiveCycle(names)
                        } else {
                            GroundError::NotStratified(names)
                        });
                    }
                    _ => {}
                }
            } else {
                rank[top.0 as usize] = next;
                next += 1;
                state[top.0 as usize] = DONE;
                stack.pop();
            }
        }
    }
    Ok(rank)
}

fn fmt_prob(p: f64) -> String {
    let s = format!("{p}");
    if s.contains('.') || s.contains('e') {
        s
    } else {
        format!("{s}.0")
    }
}

impl fmt::Display for GroundProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (a, p) in &self.prob_facts {
            writeln!(f, "{} :: {}.", fmt_prob(*p), self.table.atom(*a))?;
        }
        for r in &self.rules {
            write!(f, "{}", self.table.atom(r.head))?;
            for (i, l) in r.body.iter().enumerate() {
                f.write_str(if i == 0 { " :- " } else { ", " })?;
                write!(f, "{}", self.table.lit(*l))?;
            }
            writeln!(f, ".")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::Term;

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
    fn rank_orders_bodies_first() {
        let (t, ids) = setup(&["a", "b", "c"]);
        let rules = vec![
            GroundRule {
                head: ids[0],
                body: vec![Lit::pos(ids[1]), Lit::neg(ids[2])],
            },
            GroundRule {
                head: ids[1],
                body: vec![Lit::pos(ids[2])],
            },
        ];
        let g = GroundProgram::from_parts(t, rules, vec![(ids[2], 0.5)]).unwrap();
        assert!(g.rank(ids[2]) < g.rank(ids[1]));
        assert!(g.rank(ids[1]) < g.rank(ids[0]));
        assert_eq!(
            g.to_string(),
            "0.5 :: c @ 0.\na @ 0 :- b @ 0, -c @ 0.\nb @ 0 :- c @ 0.\n"
        );
    }

    #[test]
    fn cycles_are_rejected() {
        let (t, ids) = setup(&["a", "b"]);
        let rules = vec![
            GroundRule {
                head: ids[0],
                body: vec![Lit::pos(ids[1])],
            },
            GroundRule {
                head: ids[1],
                body: vec![Lit::pos(ids[0])],
            },
        ];
        assert!(matches!(
            GroundProgram::from_parts(t.clone(), rules, vec![]),
            Err(GroundError::PositiveCycle(_))
        ));
        let rules = vec![
            GroundRule {
                head: ids[0],
                body: vec![Lit::neg(ids[1])],
            },
            GroundRule {
                head: ids[1],
                body: vec![Lit::pos(ids[0])],
            },
        ];
        assert!(matches!(
            GroundProgram::from_parts(t, rules, vec![]),
            Err(GroundError::NotStratified(_))
        ));
    }

    #[test]
    fn shared_fact_atoms_are_split() {
        let (t, ids) = setup(&["q"]);
        let g = GroundProgram::from_parts(t, vec![], vec![(ids[0], 0.5), (ids[0], 0.5)]).unwrap();
        assert_eq!(g.prob_facts.len(), 2);
        assert!(g.prob(ids[0]).is_none());
        assert_eq!(g.rules_for(ids[0]).count(), 2);
    }
}
