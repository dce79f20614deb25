use crate::logic::{eval_atom, eval_term, Atom, Head, Literal, Term};

use super::GroundError;

const TOLERANCE: f64 = 1e-6;

/// Output of [`normalize`]: a normal rule (probability 1) or a probabilistic fact.
#[derive(Clone, Debug, PartialEq)]
pub enum NormalItem {
    Rule { head: Atom, body: Vec<Literal> },
    ProbFact { prob: f64, atom: Atom },
}

/// Names for the auxiliary atoms of one normalized rule instance.
#[derive(Clone, Debug)]
pub struct AuxNames {
    pub head: String,
    pub case_prefix: String,
}

impl AuxNames {
    pub fn case(&self, i: usize) -> String {
        format!("{}_{}", self.case_prefix, i + 1)
    }
}

fn probability(t: &Term) -> Result<f64, GroundError> {
    let v = eval_term(t)?;
    v.as_f64()
        .ok_or_else(|| GroundError::BadProbability(format!("{v} is not a number")))
}

fn is_weighted(items: &[Term]) -> bool {
    !items.is_empty()
        && items
            .iter()
            .all(|t| matches!(t, Term::List(pair) if pair.len() == 2 && matches!(pair[1], Term::Real(_))))
}

/// The alternatives of a ground head as `(probability, evaluated atom)` pairs. A
/// distribution head becomes one equation per support element, weighted uniformly
/// unless every element is a `[value, weight]` pair.
pub fn sum_cases(head: &Head) -> Result<Vec<(f64, Atom)>, GroundError> {
    match head {
        Head::Ordinary { prob, atom } => Ok(vec![(probability(prob)?, eval_atom(atom)?)]),
        Head::Sum(items) => items
            .iter()
            .map(|(p, a)| Ok((probability(p)?, eval_atom(a)?)))
            .collect(),
        Head::Distribution {
            func,
            args,
            support,
            time,
        } => {
            let items = match eval_term(support)? {
                Term::List(items) => items,
                other => {
                    return Err(GroundError::Eval(crate::logic::EvalError::IllSorted(format!(
                        "distribution support {other} is not a list"
                    ))))
                }
            };
            let args = args.iter().map(eval_term).collect::<Result<Vec<_>, _>>()?;
            let time = eval_term(time)?;
            let eq = |v: Term| Atom::Equation {
                func: func.clone(),
                args: args.clone(),
                rhs: v,
                time: time.clone(),
            };
            if is_weighted(&items) {
                let cases: Vec<(f64, Atom)> = items
                    .into_iter()
                    .map(|t| match t {
                        Term::List(mut pair) => {
                            let w = pair.pop().and_then(|w| w.as_f64()).unwrap_or(0.0);
                            (w, eq(pair.pop().unwrap()))
                        }
                        _ => unreachable!(),
                    })
                    .collect();
                let total: f64 = cases.iter().map(|c| c.0).sum();
                if (total - 1.0).abs() > TOLERANCE {
                    return Err(GroundError::BadProbability(format!(
                        "weights of {func} sum to {total}, not 1"
                    )));
                }
                Ok(cases)
            } else {
                let m = items.len() as f64;
                Ok(items.into_iter().map(|v| (1.0 / m, eq(v))).collect())
            }
        }
    }
}

/// Expand a ground rule with alternatives `cases` and normal body `body` into normal
/// rules and probabilistic facts. Case `i` is selected by a fresh fact with probability
/// `pr_i / (1 - pr_1 - ... - pr_{i-1})`; once the remaining mass is used up the case fact
/// becomes certain and later cases are dropped.
pub fn normalize(cases: &[(f64, Atom)], body: &[Literal], names: &AuxNames) -> Result<Vec<NormalItem>, GroundError> {
    let mut total = 0.0;
    for (p, a) in cases {
        if !(*p > 0.0 && *p <= 1.0 + TOLERANCE) {
            return Err(GroundError::BadProbability(format!("{p} for {a}")));
        }
        total += p;
    }
    if total > 1.0 + TOLERANCE {
        let atoms: Vec<String> = cases.iter().map(|c| c.1.to_string()).collect();
        return Err(GroundError::BadProbability(format!(
            "alternatives {} sum to {total}",
            atoms.join(", ")
        )));
    }
    let Some((_, first)) = cases.first() else {
        return Ok(Vec::new());
    };
    if cases.len() == 1 && cases[0].0 >= 1.0 - TOLERANCE {
        return Ok(vec![NormalItem::Rule {
            head: first.clone(),
            body: body.to_vec(),
        }]);
    }
    if cases.len() == 1 && body.is_empty() {
        return Ok(vec![NormalItem::ProbFact {
            prob: cases[0].0,
            atom: first.clone(),
        }]);
    }

    let time = first.time().cloned().unwrap_or(Term::Int(0));
    let aux = |name: &str| Atom::ordinary(name, Vec::new(), time.clone());
    let mut out = Vec::new();
    let mut prefix = Vec::new();
    if !body.is_empty() {
        let h = aux(&names.head);
        out.push(NormalItem::Rule {
            head: h.clone(),
            body: body.to_vec(),
        });
        prefix.push(Literal::pos(h));
    }
    let case_atoms: Vec<Atom> = (0..cases.len()).map(|i| aux(&names.case(i))).collect();
    let mut remaining = 1.0;
    for (i, (p, a)) in cases.iter().enumerate() {
        let c = case_atoms[i].clone();
        let mut rule_body = prefix.clone();
        rule_body.extend(case_atoms[..i].iter().cloned().map(Literal::neg));
        rule_body.push(Literal::pos(c.clone()));
        out.push(NormalItem::Rule {
            head: a.clone(),
            body: rule_body,
        });
        if *p >= remaining - TOLERANCE {
            out.push(NormalItem::Rule {
                head: c,
                body: Vec::new(),
            });
            break;
        }
        out.push(NormalItem::ProbFact {
            prob: p / remaining,
            atom: c,
        });
        remaining -= p;
    }
    Ok(out)
}
