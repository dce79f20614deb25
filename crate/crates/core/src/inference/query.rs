use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use log::info;
use rayon::prelude::*;

use crate::ground::{
    consistent, ground, ground_negatives, DomainIndex, GroundOptions, GroundProgram, GroundRule, Lit, Matcher,
};
use crate::logic::{eval_atom, eval_builtin_atom, Atom, Literal, Substitutable, Substitution, Term};
use crate::parser::{answer_variables, ground_literals, InputQuery};
use crate::semantics::success_probability;
use crate::strat::TimedStratum;
use crate::Program;

use super::disjoint::disjoint_transform;
use super::ve::{ve_with, VeOptions, VeStats};
use super::InferenceError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QueryOptions {
    /// Last time point; defaults to the latest ground time in the query.
    pub eot: Option<i64>,
    pub guided: bool,
    pub ve: VeOptions,
    pub cautious_disjointing: bool,
    /// Use the enumeration semantics instead of variable elimination.
    pub oracle: bool,
    /// Answer candidates concurrently.
    pub parallel: bool,
}

impl Default for QueryOptions {
    fn default() -> Self {
        QueryOptions {
            eot: None,
            guided: true,
            ve: VeOptions::default(),
            cautious_disjointing: false,
            oracle: false,
            parallel: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Answer {
    /// Bindings of the query's named variables; empty for ground queries.
    pub subst: Substitution,
    pub prob: f64,
}

/// Size and timing of one grounding stage.
#[derive(Clone, Debug, PartialEq)]
pub struct StageInfo {
    pub name: String,
    pub rules: usize,
    pub prob_facts: usize,
    pub domain: usize,
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq)]
pub struct QueryReport {
    pub answers: Vec<Answer>,
    /// Whether the query had no answer variables.
    pub ground: bool,
    pub eot: i64,
    pub stages: Vec<StageInfo>,
    pub ve: VeStats,
}

/// Latest ground time point mentioned in the query or its evidence, or 0.
pub fn default_eot(q: &InputQuery) -> i64 {
    let atoms = q
        .body
        .positives
        .iter()
        .chain(q.body.negatives.iter().flatten())
        .chain(&q.evidence);
    atoms
        .filter_map(|a| a.time())
        .filter_map(|t| match crate::logic::eval_term(t) {
            Ok(Term::Int(n)) => Some(n),
            _ => None,
        })
        .max()
        .unwrap_or(0)
        .max(0)
}

struct Ctx<'a> {
    program: &'a Program,
    opts: QueryOptions,
    eot: i64,
    /// The single exhaustive grounding used by every stage in unguided mode.
    unguided: Option<GroundProgram>,
}

impl Ctx<'_> {
    fn ground(&self, query: &[Literal]) -> Result<GroundProgram, InferenceError> {
        match &self.unguided {
            Some(g) => Ok(g.clone()),
            None => Ok(ground(
                self.program,
                query,
                &GroundOptions {
                    eot: self.eot,
                    guided: true,
                },
            )?),
        }
    }

    /// Success probability of `lits` in `g`, optionally as the disjunction of several
    /// alternative bodies that are each conjoined with `lits`.
    fn probability(
        &self,
        mut g: GroundProgram,
        lits: &[Literal],
        alternatives: &[Vec<Literal>],
    ) -> Result<(f64, VeStats), InferenceError> {
        let Some(mut q) = g.query_lits(lits)? else {
            return Ok((0.0, VeStats::default()));
        };
        if !alternatives.is_empty() {
            let time = alternatives
                .iter()
                .flatten()
                .filter_map(|l| l.atom.time_value())
                .max()
                .unwrap_or(0);
            let goal = g.intern(
                Atom::ordinary("$query", Vec::new(), Term::Int(time)),
                TimedStratum {
                    time,
                    stratum: usize::MAX,
                },
            );
            let mut extra = Vec::new();
            for body in alternatives {
                if let Some(body) = g.query_lits(body)? {
                    extra.push(GroundRule { head: goal, body });
                }
            }
            g = g.with_rules(extra)?;
            q.push(Lit::pos(goal));
        }
        if self.opts.oracle {
            return Ok((success_probability(&g, &q)?, VeStats::default()));
        }
        let d = disjoint_transform(&g, self.opts.cautious_disjointing)?;
        let (p, stats) = ve_with(&d, &q, &self.opts.ve);
        if stats.exhausted {
            return Err(InferenceError::BudgetExhausted(stats.expansions));
        }
        Ok((p, stats))
    }
}

fn stage(name: &str, g: &GroundProgram, start: Instant) -> StageInfo {
    StageInfo {
        name: name.to_string(),
        rules: g.rules.len(),
        prob_facts: g.prob_facts.len(),
        domain: g.domain().len(),
        elapsed: start.elapsed(),
    }
}

fn to_literals(g: &GroundProgram, body: &[Lit]) -> Vec<Literal> {
    body.iter()
        .map(|l| Literal {
            positive: l.positive,
            atom: g.table.atom(l.atom).clone(),
        })
        .collect()
}

fn is_ground_query(q: &InputQuery) -> bool {
    answer_variables(&q.body).is_empty() && q.body.positives.iter().all(Atom::is_ground)
}

/// Answer a conditional query `B | E`: ground for the evidence, then for the ground part
/// of the whole query, then once per answer candidate; each answer's probability is
/// `P(B', E) / P(E)`.
pub fn answer_conditional(
    program: &Program,
    q: &InputQuery,
    opts: &QueryOptions,
) -> Result<QueryReport, InferenceError> {
    let eot = opts.eot.unwrap_or_else(|| default_eot(q));
    let mut stages = Vec::new();
    let mut ve_stats = VeStats::default();
    let unguided = if opts.guided {
        None
    } else {
        let start = Instant::now();
        let g = ground(program, &[], &GroundOptions { eot, guided: false })?;
        stages.push(stage("unguided", &g, start));
        Some(g)
    };
    let ctx = Ctx {
        program,
        opts: *opts,
        eot,
        unguided,
    };

    let evidence: Vec<Literal> = q.evidence.iter().cloned().map(Literal::pos).collect();
    let mut stage_b_query = ground_literals(&q.body);
    stage_b_query.extend(evidence.iter().cloned());
    let mut reused = None;
    let p_evidence = if evidence.is_empty() {
        1.0
    } else {
        let start = Instant::now();
        let g = ctx.ground(&evidence)?;
        if opts.guided {
            stages.push(stage("evidence", &g, start));
        }
        if stage_b_query.len() == evidence.len() {
            reused = Some(g.clone());
        }
        let (p, s) = ctx.probability(g, &evidence, &[])?;
        add_stats(&mut ve_stats, &s);
        p
    };
    info!("P(evidence) = {p_evidence}");
    if p_evidence <= 0.0 {
        let names: Vec<String> = q.evidence.iter().map(|a| a.to_string()).collect();
        return Err(InferenceError::ZeroEvidence(names.join(", ")));
    }

    let mut evaluated = Vec::new();
    for l in stage_b_query.iter().filter(|l| !l.atom.is_builtin()) {
        evaluated.push(Literal {
            positive: l.positive,
            atom: eval_atom(&l.atom)?,
        });
    }
    if !consistent(&evaluated, &[]) {
        // No world satisfies the query, and the guided grounding for it is empty, so
        // negative elements must not be decided against that grounding.
        info!("query and evidence are inconsistent");
        let answers = if is_ground_query(q) {
            vec![Answer {
                subst: Substitution::new(),
                prob: 0.0,
            }]
        } else {
            Vec::new()
        };
        return Ok(QueryReport {
            ground: is_ground_query(q),
            answers,
            eot,
            stages,
            ve: ve_stats,
        });
    }

    let start = Instant::now();
    let gb = match reused {
        Some(g) => g,
        None => ctx.ground(&stage_b_query)?,
    };
    if opts.guided {
        stages.push(stage("query", &gb, start));
    }

    let vars = answer_variables(&q.body);
    let is_ground = is_ground_query(q);
    let groups = candidates(&gb, q, &vars, is_ground)?;

    let start = Instant::now();
    let answer =
        |(key, bodies): (&Substitution, &Vec<Vec<Literal>>)| -> Result<(Answer, VeStats, usize), InferenceError> {
            if bodies.is_empty() {
                return Ok((
                    Answer {
                        subst: key.clone(),
                        prob: 0.0,
                    },
                    VeStats::default(),
                    0,
                ));
            }
            let mut common: Vec<Literal> = bodies[0].clone();
            for b in &bodies[1..] {
                common.retain(|l| b.contains(l));
            }
            let mut grounding_query = common.clone();
            grounding_query.extend(evidence.iter().cloned());
            let g = ctx.ground(&grounding_query)?;
            let size = g.size();
            let (p, s) = if bodies.len() == 1 {
                ctx.probability(g, &[bodies[0].clone(), evidence.clone()].concat(), &[])?
            } else {
                ctx.probability(g, &evidence, bodies)?
            };
            Ok((
                Answer {
                    subst: key.clone(),
                    prob: p / p_evidence,
                },
                s,
                size,
            ))
        };
    let results: Vec<(Answer, VeStats, usize)> = if opts.parallel {
        groups.par_iter().map(answer).collect::<Result<_, _>>()?
    } else {
        groups.iter().map(answer).collect::<Result<_, _>>()?
    };
    let mut answers = Vec::new();
    let mut total_size = 0;
    for (a, s, size) in results {
        add_stats(&mut ve_stats, &s);
        total_size += size;
        if is_ground || a.prob > 0.0 {
            answers.push(a);
        }
    }
    if opts.guided {
        stages.push(StageInfo {
            name: "answers".into(),
            rules: total_size,
            prob_facts: 0,
            domain: groups.len(),
            elapsed: start.elapsed(),
        });
    }
    Ok(QueryReport {
        answers,
        ground: is_ground,
        eot,
        stages,
        ve: ve_stats,
    })
}

fn add_stats(total: &mut VeStats, s: &VeStats) {
    total.expansions += s.expansions;
    total.cache_hits += s.cache_hits;
    total.prunes += s.prunes;
    total.max_fact_uses = total.max_fact_uses.max(s.max_fact_uses);
}

/// Answer candidates grouped by the bindings of the named variables, each with the
/// normal bodies of all its instances over the domain of `g`.
fn candidates(
    g: &GroundProgram,
    q: &InputQuery,
    vars: &[crate::logic::Sym],
    is_ground: bool,
) -> Result<BTreeMap<Substitution, Vec<Vec<Literal>>>, InferenceError> {
    let domain = g.domain();
    let mut index = DomainIndex::new();
    for &a in &domain {
        index.insert(&g.table, a);
    }
    let in_domain: BTreeSet<_> = domain.iter().copied().collect();
    let accept = |id| in_domain.contains(&id);
    let matcher = Matcher {
        table: &g.table,
        index: &index,
        accept: &accept,
    };

    let mut instances: Vec<(Substitution, Vec<Literal>)> = Vec::new();
    if is_ground {
        let mut positives = Vec::new();
        let mut holds = true;
        for a in &q.body.positives {
            if a.is_builtin() {
                holds &= eval_builtin_atom(a)?;
            } else {
                positives.push(eval_atom(a)?);
            }
        }
        if holds {
            instances.push((Substitution::new(), positives.into_iter().map(Literal::pos).collect()));
        }
    } else {
        for m in matcher.solve(&q.body.positives, Substitution::new())? {
            let positives = m.atoms.iter().map(|&a| Literal::pos(g.table.atom(a).clone())).collect();
            instances.push((m.subst, positives));
        }
    }

    let mut groups: BTreeMap<Substitution, Vec<Vec<Literal>>> = BTreeMap::new();
    if is_ground {
        groups.insert(Substitution::new(), Vec::new());
    }
    for (subst, positives) in instances {
        let key = subst.restrict(vars);
        let negatives: Vec<Vec<Atom>> = q.body.negatives.iter().map(|e| e.apply_subst(&subst)).collect();
        let bodies = ground_negatives(&matcher, &[], &negatives)?;
        let entry = groups.entry(key).or_default();
        for b in bodies {
            let negs = to_literals(g, &b);
            if negs.iter().any(|n| positives.iter().any(|p| p.atom == n.atom)) {
                continue;
            }
            let lits: Vec<Literal> = positives.iter().cloned().chain(negs).collect();
            if !entry.contains(&lits) {
                entry.push(lits);
            }
        }
    }
    Ok(groups)
}

/// `p` with `precision` decimals, trailing zeros trimmed (keeping one decimal).
pub fn format_prob(p: f64, precision: usize) -> String {
    let s = format!("{p:.precision$}");
    if !s.contains('.') {
        return s;
    }
    let t = s.trim_end_matches('0');
    if t.ends_with('.') {
        format!("{t}0")
    } else {
        t.to_string()
    }
}

/// `P` for ground queries, `P :: [X = v, ...]` otherwise.
pub fn format_answer(a: &Answer, vars: &[crate::logic::Sym], precision: usize, ground: bool) -> String {
    let p = format_prob(a.prob, precision);
    if ground {
        return p;
    }
    let bindings: Vec<String> = vars
        .iter()
        .filter_map(|v| a.subst.get(v).map(|t| format!("{v} = {t}")))
        .collect();
    format!("{p} :: [{}]", bindings.join(", "))
}
