use std::collections::BTreeMap;

use log::debug;
use rustc_hash::{FxHashMap, FxHashSet};

use crate::logic::{eval_atom, Atom, Head, Literal, Substitutable, Substitution, Term};
use crate::program::{rule_stratum, Program};
use crate::strat::{Schedule, TimedStratum};

use super::body::ground_negatives;
use super::matcher::{DomainIndex, Match, Matcher};
use super::normal::{normalize, sum_cases, AuxNames, NormalItem};
use super::program::{GroundProgram, GroundRule};
use super::table::{AtomId, AtomTable, Lit, LitSet};
use super::GroundError;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GroundOptions {
    /// Last time point considered; heads after it are never derived.
    pub eot: i64,
    /// Prune with the (regressed) query; otherwise ground exhaustively.
    pub guided: bool,
}

impl Default for GroundOptions {
    fn default() -> Self {
        GroundOptions { eot: 0, guided: true }
    }
}

/// Ground `program` up to `opts.eot`, in guided mode keeping only what can contribute to
/// models of the ground `query`.
pub fn ground(program: &Program, query: &[Literal], opts: &GroundOptions) -> Result<GroundProgram, GroundError> {
    let mut engine = Engine::new(program, *opts);
    engine.seed_query(query)?;
    engine.run()?;
    engine.finish()
}

/// Which domain atoms a matcher may use.
#[derive(Clone, Copy, Debug)]
enum Scope {
    Upto(TimedStratum),
    Before(TimedStratum),
    TimeUpto(i64),
}

#[derive(Clone, Debug)]
struct Entry {
    head: AtomId,
    body: Vec<Lit>,
    prob: Option<f64>,
    alive: bool,
}

struct Engine<'p> {
    program: &'p Program,
    opts: GroundOptions,
    table: AtomTable,
    index: DomainIndex,
    indexed: Vec<bool>,
    /// Alive rules and probabilistic facts per head; the domain is the atoms with a count.
    head_count: Vec<u32>,
    /// Rules mentioning an atom in their body.
    users: Vec<Vec<u32>>,
    entries: Vec<Entry>,
    by_head: FxHashMap<AtomId, Vec<u32>>,
    rule_keys: FxHashSet<(AtomId, Vec<Lit>)>,
    instances: FxHashSet<(usize, Head, Vec<Lit>)>,
    counters: Vec<usize>,
    eq_atoms: FxHashMap<u32, Vec<AtomId>>,
    query: LitSet,
    scanned: usize,
    expanded: FxHashMap<AtomId, usize>,
}

impl<'p> Engine<'p> {
    fn new(program: &'p Program, opts: GroundOptions) -> Self {
        Engine {
            program,
            opts,
            table: AtomTable::new(),
            index: DomainIndex::new(),
            indexed: Vec::new(),
            head_count: Vec::new(),
            users: Vec::new(),
            entries: Vec::new(),
            by_head: FxHashMap::default(),
            rule_keys: FxHashSet::default(),
            instances: FxHashSet::default(),
            counters: vec![0; program.rules.len()],
            eq_atoms: FxHashMap::default(),
            query: LitSet::new(),
            scanned: 0,
            expanded: FxHashMap::default(),
        }
    }

    fn intern(&mut self, atom: Atom, strat: TimedStratum) -> AtomId {
        let before = self.table.len();
        let id = self.table.intern(atom, strat);
        if self.table.len() > before {
            self.indexed.push(false);
            self.head_count.push(0);
            self.users.push(Vec::new());
            if let Some(k) = self.table.eq_key(id) {
                self.eq_atoms.entry(k).or_default().push(id);
            }
        }
        id
    }

    fn intern_user(&mut self, atom: Atom) -> Result<AtomId, GroundError> {
        if let Some(id) = self.table.get(&atom) {
            return Ok(id);
        }
        let strat = self.program.strat.strat_of(&atom)?;
        Ok(self.intern(atom, strat))
    }

    fn seed_query(&mut self, query: &[Literal]) -> Result<(), GroundError> {
        for l in query {
            if l.atom.is_builtin() {
                continue;
            }
            if !l.atom.is_ground() {
                return Err(GroundError::NonGroundQuery(l.atom.to_string()));
            }
            let atom = eval_atom(&l.atom)?;
            let id = match self.program.strat.strat_of(&atom) {
                Ok(_) => self.intern_user(atom)?,
                // Never derivable; kept out of regression.
                Err(_) => {
                    let time = atom.time_value().unwrap_or(0);
                    self.intern(
                        atom,
                        TimedStratum {
                            time,
                            stratum: usize::MAX,
                        },
                    )
                }
            };
            self.query.insert(
                &self.table,
                Lit {
                    atom: id,
                    positive: l.positive,
                },
            );
        }
        Ok(())
    }

    fn accepts(&self, id: AtomId, scope: Scope) -> bool {
        if self.head_count[id as usize] == 0 {
            return false;
        }
        let s = self.table.strat(id);
        match scope {
            Scope::Upto(t) => s <= t,
            Scope::Before(t) => s < t,
            Scope::TimeUpto(n) => s.time <= n,
        }
    }

    fn solve(&self, conj: &[Atom], init: Substitution, scope: Scope) -> Result<Vec<Match>, GroundError> {
        let accept = |id: AtomId| self.accepts(id, scope);
        Matcher {
            table: &self.table,
            index: &self.index,
            accept: &accept,
        }
        .solve(conj, init)
    }

    fn bodies(&self, positives: &[Lit], negatives: &[Vec<Atom>], scope: Scope) -> Result<Vec<Vec<Lit>>, GroundError> {
        let accept = |id: AtomId| self.accepts(id, scope);
        let matcher = Matcher {
            table: &self.table,
            index: &self.index,
            accept: &accept,
        };
        ground_negatives(&matcher, positives, negatives)
    }

    fn run(&mut self) -> Result<(), GroundError> {
        let program = self.program;
        let strata = program.strat.len();
        let mut now: Vec<Vec<usize>> = vec![Vec::new(); strata];
        let mut future = Vec::new();
        let mut once: BTreeMap<TimedStratum, Vec<usize>> = BTreeMap::new();
        for (i, (rule, info)) in program.rules.iter().zip(&program.infos).enumerate() {
            let Some(s) = rule_stratum(rule, &program.strat) else {
                continue;
            };
            match info.schedule {
                Schedule::Now { .. } => now[s].push(i),
                Schedule::Future { .. } => future.push(i),
                Schedule::Head => {
                    let head = rule.head.preds()[0].clone();
                    let time = match crate::logic::eval_term(rule.head.time())? {
                        Term::Int(t) => t,
                        other => {
                            return Err(GroundError::Eval(crate::logic::EvalError::IllSorted(format!(
                                "time term {other} in head of predicate {head}"
                            ))))
                        }
                    };
                    if time < 0 {
                        return Err(crate::strat::StratError::NegativeTime(rule.head.to_string()).into());
                    }
                    if time <= self.opts.eot {
                        once.entry(TimedStratum { time, stratum: s }).or_default().push(i);
                    }
                }
            }
        }

        for n in 0..=self.opts.eot {
            for s in 0..strata {
                let here = TimedStratum { time: n, stratum: s };
                loop {
                    let mut added = 0;
                    for &i in once.get(&here).map(Vec::as_slice).unwrap_or(&[]) {
                        added += self.fire(i, Substitution::new(), Scope::Upto(here), Scope::Before(here))?;
                    }
                    for &i in &now[s] {
                        let var = program.infos[i].pivot_var().unwrap();
                        let init = Substitution::new().with(var, Term::Int(n));
                        added += self.fire(i, init, Scope::Upto(here), Scope::Before(here))?;
                    }
                    if !program.recursive[s] || added == 0 {
                        break;
                    }
                }
                if self.opts.guided {
                    self.guide(here);
                }
            }
            if n < self.opts.eot {
                for &i in &future {
                    let var = program.infos[i].pivot_var().unwrap();
                    let init = Substitution::new().with(var, Term::Int(n));
                    self.fire(i, init, Scope::TimeUpto(n), Scope::TimeUpto(n))?;
                }
            }
            debug!("time {n}: {} ground rules", self.entries.len());
        }
        Ok(())
    }

    /// Ground all new instances of rule `i`; returns the number of rules added.
    fn fire(&mut self, i: usize, init: Substitution, pos: Scope, neg: Scope) -> Result<usize, GroundError> {
        let program = self.program;
        let rule = &program.rules[i];
        let matches = self.solve(&rule.body.positives, init, pos)?;
        let mut added = 0;
        for m in matches {
            let head = rule.head.apply_subst(&m.subst);
            let positives: Vec<Lit> = m.atoms.iter().map(|&a| Lit::pos(a)).collect();
            let negatives: Vec<Vec<Atom>> = rule.body.negatives.iter().map(|e| e.apply_subst(&m.subst)).collect();
            let bodies = self.bodies(&positives, &negatives, neg)?;
            if bodies.is_empty() {
                continue;
            }
            let cases = sum_cases(&head)?;
            let Some((_, first)) = cases.first() else { continue };
            let time = first.time_value().unwrap_or(0);
            if time > self.opts.eot {
                continue;
            }
            let head_strat = self.program.strat.strat_of(first)?;
            for body in bodies {
                if self.opts.guided && !self.query.consistent_with(&self.table, &body) {
                    continue;
                }
                let mut key = body.clone();
                key.sort_unstable();
                if !self.instances.insert((i, head.clone(), key)) {
                    continue;
                }
                let k = self.counters[i];
                self.counters[i] += 1;
                let names = AuxNames {
                    head: format!("$h{i}_{k}"),
                    case_prefix: format!("$c{i}_{k}"),
                };
                let literals: Vec<Literal> = body
                    .iter()
                    .map(|l| Literal {
                        positive: l.positive,
                        atom: self.table.atom(l.atom).clone(),
                    })
                    .collect();
                for item in normalize(&cases, &literals, &names)? {
                    added += self.add_item(item, &body, head_strat)? as usize;
                }
            }
        }
        Ok(added)
    }

    fn add_item(&mut self, item: NormalItem, original: &[Lit], head_strat: TimedStratum) -> Result<bool, GroundError> {
        match item {
            NormalItem::ProbFact { prob, atom } => {
                let id = self.intern_item_atom(atom, head_strat)?;
                self.push(id, Vec::new(), Some(prob));
                Ok(true)
            }
            NormalItem::Rule { head, body } => {
                let id = self.intern_item_atom(head, head_strat)?;
                let lits = if body.len() == original.len()
                    && body
                        .iter()
                        .zip(original)
                        .all(|(l, o)| l.positive == o.positive && self.table.atom(o.atom) == &l.atom)
                {
                    original.to_vec()
                } else {
                    let mut lits = Vec::with_capacity(body.len());
                    for l in body {
                        let a = self.intern_item_atom(l.atom, head_strat)?;
                        lits.push(Lit {
                            atom: a,
                            positive: l.positive,
                        });
                    }
                    lits
                };
                let mut key = lits.clone();
                key.sort_unstable();
                if !self.rule_keys.insert((id, key)) {
                    return Ok(false);
                }
                self.push(id, lits, None);
                Ok(true)
            }
        }
    }

    fn intern_item_atom(&mut self, atom: Atom, head_strat: TimedStratum) -> Result<AtomId, GroundError> {
        match &atom {
            Atom::Ordinary { pred, .. } if pred.starts_with('$') => Ok(self.intern(atom, head_strat)),
            _ => self.intern_user(atom),
        }
    }

    fn push(&mut self, head: AtomId, body: Vec<Lit>, prob: Option<f64>) {
        let id = self.entries.len() as u32;
        for l in &body {
            self.users[l.atom as usize].push(id);
        }
        self.entries.push(Entry {
            head,
            body,
            prob,
            alive: true,
        });
        self.by_head.entry(head).or_default().push(id);
        self.head_count[head as usize] += 1;
        if !self.indexed[head as usize] {
            self.indexed[head as usize] = true;
            self.index.insert(&self.table, head);
        }
    }

    /// Regress the query over the rules of strata up to `here`, then drop rules whose
    /// bodies contradict it, until neither changes.
    fn guide(&mut self, here: TimedStratum) {
        loop {
            let mut changed = false;
            let mut i = 0;
            while i < self.query.len() {
                let l = self.query.lits()[i];
                i += 1;
                if !l.positive || self.table.strat(l.atom) > here {
                    continue;
                }
                let alive: Vec<u32> = self
                    .by_head
                    .get(&l.atom)
                    .into_iter()
                    .flatten()
                    .copied()
                    .filter(|&r| self.entries[r as usize].alive)
                    .collect();
                if self.expanded.get(&l.atom) == Some(&alive.len()) {
                    continue;
                }
                self.expanded.insert(l.atom, alive.len());
                // A fact or probabilistic fact for the atom has an empty body.
                if alive.is_empty() || alive.iter().any(|&r| self.entries[r as usize].body.is_empty()) {
                    continue;
                }
                let mut common = self.entries[alive[0] as usize].body.clone();
                for &r in &alive[1..] {
                    let body = &self.entries[r as usize].body;
                    common.retain(|x| body.contains(x));
                }
                for c in common {
                    changed |= self.query.insert(&self.table, c);
                }
            }
            if self.prune() > 0 {
                changed = true;
            }
            if !changed {
                break;
            }
        }
    }

    /// Kill rules whose bodies contradict query literals added since the last call.
    fn prune(&mut self) -> usize {
        let fresh: Vec<Lit> = self.query.lits()[self.scanned..].to_vec();
        self.scanned = self.query.len();
        let mut killed = 0;
        for l in fresh {
            let mut atoms = vec![l.atom];
            if l.positive {
                if let Some(k) = self.table.eq_key(l.atom) {
                    atoms.extend(self.eq_atoms[&k].iter().copied().filter(|&a| a != l.atom));
                }
            }
            for a in atoms {
                let users = self.users[a as usize].clone();
                for r in users {
                    let e = &self.entries[r as usize];
                    if e.alive && !self.query.consistent_with(&self.table, &e.body) {
                        killed += self.kill(r);
                    }
                }
            }
        }
        killed
    }

    /// Remove a rule; atoms left without rules leave the domain and take the rules that
    /// use them positively along.
    fn kill(&mut self, r: u32) -> usize {
        let mut killed = 0;
        let mut work = vec![r];
        while let Some(r) = work.pop() {
            let e = &mut self.entries[r as usize];
            if !e.alive {
                continue;
            }
            e.alive = false;
            killed += 1;
            let h = e.head;
            self.head_count[h as usize] -= 1;
            if self.head_count[h as usize] == 0 {
                for &u in &self.users[h as usize] {
                    let ue = &self.entries[u as usize];
                    if ue.alive && ue.body.contains(&Lit::pos(h)) {
                        work.push(u);
                    }
                }
            }
        }
        killed
    }

    /// Auxiliary atoms whose rules were all pruned leave their case facts and head rules
    /// unused; those are dropped.
    fn sweep_unused_aux(&mut self) {
        let mut uses = vec![0u32; self.table.len()];
        for e in self.entries.iter().filter(|e| e.alive) {
            for l in &e.body {
                uses[l.atom as usize] += 1;
            }
        }
        for l in self.query.lits() {
            uses[l.atom as usize] += 1;
        }
        let is_aux =
            |t: &AtomTable, a: AtomId| matches!(t.atom(a), Atom::Ordinary { pred, .. } if pred.starts_with('$'));
        let mut work: Vec<u32> = (0..self.entries.len() as u32).collect();
        while let Some(r) = work.pop() {
            let e = &self.entries[r as usize];
            if !e.alive || uses[e.head as usize] > 0 || !is_aux(&self.table, e.head) {
                continue;
            }
            self.entries[r as usize].alive = false;
            for l in &self.entries[r as usize].body {
                uses[l.atom as usize] -= 1;
                if uses[l.atom as usize] == 0 {
                    work.extend(self.by_head.get(&l.atom).into_iter().flatten().copied());
                }
            }
        }
    }

    fn finish(mut self) -> Result<GroundProgram, GroundError> {
        if self.opts.guided {
            self.sweep_unused_aux();
        }
        let mut rules = Vec::new();
        let mut facts = Vec::new();
        for e in self.entries.into_iter().filter(|e| e.alive) {
            match e.prob {
                Some(p) => facts.push((e.head, p)),
                None => rules.push(GroundRule {
                    head: e.head,
                    body: e.body,
                }),
            }
        }
        GroundProgram::from_parts(self.table, rules, facts)
    }
}
