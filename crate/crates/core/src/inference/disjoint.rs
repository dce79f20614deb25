use crate::ground::{lits_consistent, GroundError, GroundProgram, GroundRule, Lit};
use crate::logic::Atom;

/// Make the bodies of all rules sharing a head pairwise inconsistent: rules
/// `h :- B_1, ..., h :- B_m` become `h_i :- B_i` and `h :- -h_1, ..., -h_{i-1}, h_i` with
/// fresh indicator atoms `h_i`. With `cautious`, heads whose bodies are already pairwise
/// inconsistent are left alone. Probabilistic facts are untouched.
pub fn disjoint_transform(g: &GroundProgram, cautious: bool) -> Result<GroundProgram, GroundError> {
    let mut table = g.table.clone();
    let mut rules: Vec<GroundRule> = Vec::with_capacity(g.rules.len());
    let mut heads: Vec<_> = g.rules.iter().map(|r| r.head).collect();
    heads.sort_unstable();
    heads.dedup();
    for h in heads {
        let group: Vec<&GroundRule> = g.rules_for(h).collect();
        let disjoint = group.len() < 2
            || (cautious
                && group.iter().enumerate().all(|(i, a)| {
                    group[i + 1..].iter().all(|b| {
                        let mut both = a.body.clone();
                        both.extend_from_slice(&b.body);
                        !lits_consistent(&table, &both)
                    })
                }));
        if disjoint {
            rules.extend(group.into_iter().cloned());
            continue;
        }
        let time = table.atom(h).time().cloned().expect("timed atom");
        let strat = table.strat(h);
        let mut indicators = Vec::with_capacity(group.len());
        for (i, r) in group.into_iter().enumerate() {
            let ind = table.intern(Atom::ordinary(&format!("$ind{h}_{i}"), Vec::new(), time.clone()), strat);
            rules.push(GroundRule {
                head: ind,
                body: r.body.clone(),
            });
            let mut body: Vec<Lit> = indicators.iter().map(|&j| Lit::neg(j)).collect();
            body.push(Lit::pos(ind));
            rules.push(GroundRule { head: h, body });
            indicators.push(ind);
        }
    }
    GroundProgram::from_parts(table, rules, g.prob_facts.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::AtomTable;
    use crate::logic::Term;
    use crate::strat::TimedStratum;

    #[test]
    fn indicator_rules() {
        let mut t = AtomTable::new();
        let s0 = TimedStratum { time: 0, stratum: 0 };
        let mut at = |n: &str| t.intern(Atom::ordinary(n, vec![], Term::Int(0)), s0);
        let (h, b1, b2) = (at("h"), at("b1"), at("b2"));
        let g = GroundProgram::from_parts(
            t,
            vec![
                GroundRule {
                    head: h,
                    body: vec![Lit::pos(b1)],
                },
                GroundRule {
                    head: h,
                    body: vec![Lit::pos(b2)],
                },
            ],
            vec![(b1, 0.5), (b2, 0.5)],
        )
        .unwrap();
        let d = disjoint_transform(&g, false).unwrap();
        assert_eq!(
            d.to_string(),
            "0.5 :: b1 @ 0.\n0.5 :: b2 @ 0.\n$ind0_0 @ 0 :- b1 @ 0.\nh @ 0 :- $ind0_0 @ 0.\n$ind0_1 @ 0 :- b2 @ 0.\nh @ 0 :- -$ind0_0 @ 0, $ind0_1 @ 0.\n"
        );
    }

    #[test]
    fn cautious_skips_exclusive_bodies() {
        let mut t = AtomTable::new();
        let s0 = TimedStratum { time: 0, stratum: 0 };
        let h = t.intern(Atom::ordinary("h", vec![], Term::Int(0)), s0);
        let sa = t.intern(Atom::equation("s", vec![], Term::constant("a"), Term::Int(0)), s0);
        let sb = t.intern(Atom::equation("s", vec![], Term::constant("b"), Term::Int(0)), s0);
        let g = GroundProgram::from_parts(
            t,
            vec![
                GroundRule {
                    head: h,
                    body: vec![Lit::pos(sa)],
                },
                GroundRule {
                    head: h,
                    body: vec![Lit::pos(sb)],
                },
            ],
            vec![],
        )
        .unwrap();
        assert_eq!(disjoint_transform(&g, true).unwrap().rules, g.rules);
        assert_eq!(disjoint_transform(&g, false).unwrap().rules.len(), 4);
    }
}
