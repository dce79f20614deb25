//! Stratification by time and by predicates: time-constraint analysis of rules, the
//! predicate call graph and its linearized strata, and timed strata of ground atoms.

use std::collections::{BTreeMap, BTreeSet};

use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use rustc_hash::FxHashMap;
use thiserror::Error;

use crate::logic::{eval_term, Atom, Cmp, Rule, Sym, Term};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StratError {
    #[error("rule `{0}` is not time constrained")]
    NotTimeConstrained(String),
    #[error("program is not stratified: cycle through negation among {{{}}}", .0.join(", "))]
    NotStratified(Vec<String>),
    #[error("atom {0} has a negative time")]
    NegativeTime(String),
    #[error("predicate {0} has no stratum")]
    UnknownPredicate(String),
}

/// How a time term relates to the pivot time `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TimeRel {
    Lt,
    Le,
    Eq,
    Gt,
    Unknown,
}

/// When a rule fires during grounding.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Schedule {
    /// Head time equals the pivot variable: fires at `(n, stratum of head)`.
    Now { var: Sym, pivots: Vec<usize> },
    /// Head time lies strictly after the pivot time: fires once all strata at `n` are done.
    Future { var: Sym, pivots: Vec<usize> },
    /// All time terms are ground: the head serves as pivot and the rule fires once, at the
    /// timed stratum of its head.
    Head,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuleInfo {
    pub schedule: Schedule,
    /// Per negative element and atom: true when the atom lies strictly before the pivot
    /// time and is therefore left out of the call graph.
    pub earlier: Vec<Vec<bool>>,
}

impl RuleInfo {
    pub fn pivot_var(&self) -> Option<&Sym> {
        match &self.schedule {
            Schedule::Now { var, .. } | Schedule::Future { var, .. } => Some(var),
            Schedule::Head => None,
        }
    }

    pub fn pivots(&self) -> &[usize] {
        match &self.schedule {
            Schedule::Now { pivots, .. } | Schedule::Future { pivots, .. } => pivots,
            Schedule::Head => &[],
        }
    }
}

/// Offset `d` such that `t` is syntactically `n + d`.
fn offset(t: &Term, n: &str) -> Option<i64> {
    match t {
        Term::Var(v) if &**v == n => Some(0),
        Term::App(op, args) if args.len() == 2 => match (&**op, &args[0], &args[1]) {
            ("+", Term::Var(v), Term::Int(k)) | ("+", Term::Int(k), Term::Var(v)) if &**v == n => Some(*k),
            ("-", Term::Var(v), Term::Int(k)) if &**v == n => k.checked_neg(),
            _ => None,
        },
        _ => None,
    }
}

fn rel_of_offset(d: i64) -> TimeRel {
    match d.signum() {
        -1 => TimeRel::Lt,
        0 => TimeRel::Eq,
        _ => TimeRel::Gt,
    }
}

/// Relation implied by a guard `v op (n + d)`.
fn guard_rel(op: Cmp, d: i64) -> TimeRel {
    match op {
        Cmp::Lt if d <= 0 => TimeRel::Lt,
        Cmp::Lt if d == 1 => TimeRel::Le,
        Cmp::Le if d < 0 => TimeRel::Lt,
        Cmp::Le if d == 0 => TimeRel::Le,
        Cmp::Eq => rel_of_offset(d),
        Cmp::Gt if d >= 0 => TimeRel::Gt,
        Cmp::Ge if d > 0 => TimeRel::Gt,
        _ => TimeRel::Unknown,
    }
}

fn strength(r: TimeRel) -> u8 {
    match r {
        TimeRel::Unknown => 0,
        TimeRel::Le => 1,
        _ => 2,
    }
}

/// Syntactic relation of time term `t` to the pivot variable `n`, using the built-in
/// atoms in `guards` for other variables.
pub fn time_relation(t: &Term, n: &str, guards: &[&Atom]) -> TimeRel {
    if let Some(d) = offset(t, n) {
        return rel_of_offset(d);
    }
    match t {
        Term::Int(0) => TimeRel::Le,
        Term::Var(v) => {
            let mut best = TimeRel::Unknown;
            for g in guards {
                let Atom::Builtin { op, lhs, rhs } = g else { continue };
                let r = match (lhs, rhs) {
                    (Term::Var(l), r) if l == v => offset(r, n).map(|d| guard_rel(*op, d)),
                    (l, Term::Var(r)) if r == v => offset(l, n).map(|d| guard_rel(op.flip(), d)),
                    _ => None,
                };
                if let Some(r) = r {
                    if strength(r) > strength(best) {
                        best = r;
                    }
                }
            }
            best
        }
        _ => TimeRel::Unknown,
    }
}

fn ground_time(t: &Term) -> Option<i64> {
    if !t.is_ground() {
        return None;
    }
    match eval_term(t) {
        Ok(Term::Int(i)) => Some(i),
        _ => None,
    }
}

/// Time-constraint analysis of a single rule.
pub fn check_time_constrained(rule: &Rule) -> Result<RuleInfo, StratError> {
    let not_tc = || StratError::NotTimeConstrained(rule.to_string());
    let positives = &rule.body.positives;
    let pos_guards: Vec<&Atom> = positives.iter().filter(|a| a.is_builtin()).collect();
    let ordinary: Vec<(usize, &Atom)> = positives.iter().enumerate().filter(|(_, a)| !a.is_builtin()).collect();

    let mut candidates: Vec<&Sym> = Vec::new();
    for (_, a) in &ordinary {
        if let Some(Term::Var(v)) = a.time() {
            if !candidates.contains(&v) {
                candidates.push(v);
            }
        }
    }

    'candidate: for n in candidates {
        for (_, a) in &ordinary {
            match time_relation(a.time().unwrap(), n, &pos_guards) {
                TimeRel::Eq | TimeRel::Le | TimeRel::Lt => {}
                _ => continue 'candidate,
            }
        }
        let future = match time_relation(rule.head.time(), n, &pos_guards) {
            TimeRel::Eq => false,
            TimeRel::Gt => true,
            _ => continue 'candidate,
        };
        let mut earlier = Vec::new();
        for element in &rule.body.negatives {
            let mut guards = pos_guards.clone();
            guards.extend(element.iter().filter(|a| a.is_builtin()));
            let mut flags = Vec::new();
            for a in element {
                match a.time() {
                    None => flags.push(false),
                    Some(t) => match time_relation(t, n, &guards) {
                        TimeRel::Eq | TimeRel::Le => flags.push(false),
                        TimeRel::Lt => flags.push(true),
                        _ => continue 'candidate,
                    },
                }
            }
            earlier.push(flags);
        }
        let pivots = ordinary
            .iter()
            .filter(|(_, a)| matches!(a.time(), Some(Term::Var(v)) if v == n))
            .map(|(i, _)| *i)
            .collect();
        let var = n.clone();
        let schedule = if future {
            Schedule::Future { var, pivots }
        } else {
            Schedule::Now { var, pivots }
        };
        return Ok(RuleInfo { schedule, earlier });
    }

    // Head as pivot: every time term is ground and none lies after the head's.
    let h = ground_time(rule.head.time()).ok_or_else(not_tc)?;
    for (_, a) in &ordinary {
        match ground_time(a.time().unwrap()) {
            Some(t) if t <= h => {}
            _ => return Err(not_tc()),
        }
    }
    let mut earlier = Vec::new();
    for element in &rule.body.negatives {
        let mut flags = Vec::new();
        for a in element {
            match a.time() {
                None => flags.push(false),
                Some(t) => match ground_time(t) {
                    Some(t) if t < h => flags.push(true),
                    Some(t) if t == h => flags.push(false),
                    _ => return Err(not_tc()),
                },
            }
        }
        earlier.push(flags);
    }
    Ok(RuleInfo {
        schedule: Schedule::Head,
        earlier,
    })
}

/// Position of a stratum in the linearization `s_1 < ... < s_m` (zero-based).
pub type StratumId = usize;

/// A pair (time point, stratum), ordered lexicographically.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TimedStratum {
    pub time: i64,
    pub stratum: StratumId,
}

impl fmt::Display for TimedStratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, s{})", self.time, self.stratum + 1)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CallEdge {
    pub from: Sym,
    pub to: Sym,
    pub negative: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratification {
    pub strata: Vec<Vec<Sym>>,
    pub index: FxHashMap<Sym, StratumId>,
}

impl Stratification {
    pub fn len(&self) -> usize {
        self.strata.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strata.is_empty()
    }

    pub fn stratum_of(&self, pred: &str) -> Option<StratumId> {
        self.index.get(pred).copied()
    }

    /// Timed stratum of a ground, evaluated ordinary atom or equation.
    pub fn strat_of(&self, a: &Atom) -> Result<TimedStratum, StratError> {
        let pred = a
            .pred_name()
            .ok_or_else(|| StratError::UnknownPredicate(a.to_string()))?;
        let stratum = self
            .stratum_of(pred)
            .ok_or_else(|| StratError::UnknownPredicate(pred.to_string()))?;
        let time = a.time_value().ok_or_else(|| StratError::NegativeTime(a.to_string()))?;
        if time < 0 {
            return Err(StratError::NegativeTime(a.to_string()));
        }
        Ok(TimedStratum { time, stratum })
    }
}

impl fmt::Display for Stratification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.strata.iter().enumerate() {
            let names: Vec<&str> = s.iter().map(|p| &**p).collect();
            writeln!(f, "s{}: {{{}}}", i + 1, names.join(", "))?;
        }
        Ok(())
    }
}

/// Call graph edges: rules with future heads are ignored, as are atoms of negative
/// elements that lie strictly before the pivot time. Every predicate becomes a node.
pub fn call_graph(rules: &[Rule], infos: &[RuleInfo]) -> (BTreeSet<Sym>, Vec<CallEdge>) {
    let mut nodes = BTreeSet::new();
    let mut edges = Vec::new();
    for (rule, info) in rules.iter().zip(infos) {
        let heads = rule.head.preds();
        nodes.extend(heads.iter().cloned());
        let body_preds = rule
            .body
            .positives
            .iter()
            .chain(rule.body.negatives.iter().flatten())
            .filter_map(|a| a.pred_name().cloned());
        nodes.extend(body_preds);
        if matches!(info.schedule, Schedule::Future { .. }) {
            continue;
        }
        // Alternatives of a sum head are defined together.
        for a in &heads {
            for b in &heads {
                if a != b {
                    edges.push(CallEdge {
                        from: a.clone(),
                        to: b.clone(),
                        negative: false,
                    });
                }
            }
        }
        for h in &heads {
            for p in rule.body.positives.iter().filter_map(|a| a.pred_name()) {
                edges.push(CallEdge {
                    from: h.clone(),
                    to: p.clone(),
                    negative: false,
                });
            }
            for (element, flags) in rule.body.negatives.iter().zip(&info.earlier) {
                for (a, earlier) in element.iter().zip(flags) {
                    if let (Some(p), false) = (a.pred_name(), *earlier) {
                        edges.push(CallEdge {
                            from: h.clone(),
                            to: p.clone(),
                            negative: true,
                        });
                    }
                }
            }
        }
    }
    (nodes, edges)
}

/// Strongly connected components of the call graph, linearized so that callees precede
/// callers; ties go to the component with the smallest predicate name.
pub fn build_stratification(rules: &[Rule], infos: &[RuleInfo]) -> Result<Stratification, StratError> {
    let (nodes, edges) = call_graph(rules, infos);
    let mut graph = DiGraph::<Sym, bool>::new();
    let mut ids: FxHashMap<Sym, NodeIndex> = FxHashMap::default();
    for n in &nodes {
        ids.insert(n.clone(), graph.add_node(n.clone()));
    }
    for e in &edges {
        graph.add_edge(ids[&e.from], ids[&e.to], e.negative);
    }
    let sccs = tarjan_scc(&graph);
    let mut comp_of = vec![0usize; graph.node_count()];
    for (c, members) in sccs.iter().enumerate() {
        for n in members {
            comp_of[n.index()] = c;
        }
    }
    for e in &edges {
        let (a, b) = (ids[&e.from], ids[&e.to]);
        if e.negative && comp_of[a.index()] == comp_of[b.index()] {
            let mut cycle: Vec<String> = sccs[comp_of[a.index()]].iter().map(|n| graph[*n].to_string()).collect();
            cycle.sort();
            return Err(StratError::NotStratified(cycle));
        }
    }
    // Kahn's algorithm on the condensation; a caller waits for all of its callees.
    let k = sccs.len();
    let mut waiting = vec![BTreeSet::new(); k];
    let mut callers = vec![BTreeSet::new(); k];
    for e in &edges {
        let (ca, cb) = (comp_of[ids[&e.from].index()], comp_of[ids[&e.to].index()]);
        if ca != cb {
            waiting[ca].insert(cb);
            callers[cb].insert(ca);
        }
    }
    let key = |c: usize| -> Sym { sccs[c].iter().map(|n| graph[*n].clone()).min().unwrap() };
    let mut ready: BTreeMap<Sym, usize> = (0..k).filter(|c| waiting[*c].is_empty()).map(|c| (key(c), c)).collect();
    let mut strata = Vec::with_capacity(k);
    let mut index = FxHashMap::default();
    while let Some((_, c)) = ready.pop_first() {
        let mut members: Vec<Sym> = sccs[c].iter().map(|n| graph[*n].clone()).collect();
        members.sort();
        for m in &members {
            index.insert(m.clone(), strata.len());
        }
        strata.push(members);
        for &caller in &callers[c] {
            waiting[caller].remove(&c);
            if waiting[caller].is_empty() {
                ready.insert(key(caller), caller);
            }
        }
    }
    Ok(Stratification { strata, index })
}
