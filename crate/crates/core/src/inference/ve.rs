use std::cmp::{Ordering, Reverse};

use rustc_hash::FxHashMap;

use crate::ground::{lits_consistent, sorted_lits_consistent, AtomId, GroundProgram, Lit};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct VeOptions {
    /// Return 0 for inconsistent subqueries without expanding them.
    pub pruning: bool,
    pub caching: bool,
    /// Track how often each probabilistic fact is multiplied in along a single path.
    pub instrument: bool,
    /// Give up after this many expansions (0 for no limit); see [`VeStats::exhausted`].
    pub max_expansions: u64,
}

impl Default for VeOptions {
    fn default() -> Self {
        VeOptions {
            pruning: true,
            caching: true,
            instrument: false,
            max_expansions: 0,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct VeStats {
    /// Subqueries resolved by expanding their maximal literal.
    pub expansions: u64,
    pub cache_hits: u64,
    /// Subqueries found inconsistent.
    pub prunes: u64,
    /// Largest number of times one probabilistic fact was multiplied in along one path
    /// (only with `instrument`).
    pub max_fact_uses: u32,
    /// The expansion budget ran out; the returned probability is meaningless.
    pub exhausted: bool,
}

/// Probability of the conjunction `q` in a program whose rules with a common head have
/// pairwise inconsistent bodies (see [`super::disjoint_transform`]).
pub fn ve(g: &GroundProgram, q: &[Lit]) -> f64 {
    ve_with(g, q, &VeOptions::default()).0
}

pub fn ve_with(g: &GroundProgram, q: &[Lit], opts: &VeOptions) -> (f64, VeStats) {
    let mut state = Ve {
        g,
        opts: *opts,
        implied: Implied::new(g),
        cache: FxHashMap::default(),
        stats: VeStats::default(),
        uses: FxHashMap::default(),
    };
    let q = state.canonical(q.to_vec());
    let p = state.inner(q);
    (p, state.stats)
}

/// Most literals kept per atom by [`implied_literals`].
const IMPLIED_CAP: usize = 256;

/// For an atom, the literals true in every derivation of it: the intersection over its
/// rules of the body literals plus what their positive atoms imply. Bodies that are
/// inconsistent under this closure cannot fire and are skipped. Sets are truncated at
/// `IMPLIED_CAP`, which keeps them sound. Computed on demand and memoized.
struct Implied {
    sets: Vec<Option<Vec<Lit>>>,
}

impl Implied {
    fn new(g: &GroundProgram) -> Self {
        Implied {
            sets: vec![None; g.table.len()],
        }
    }

    fn get(&mut self, g: &GroundProgram, a: AtomId) -> &[Lit] {
        if self.sets[a as usize].is_none() {
            // Dependencies first; the ground program is acyclic.
            let mut stack = vec![a];
            while let Some(&x) = stack.last() {
                if self.sets[x as usize].is_some() {
                    stack.pop();
                    continue;
                }
                let pending: Vec<AtomId> = if Self::trivial(g, x) {
                    Vec::new()
                } else {
                    g.rules_for(x)
                        .flat_map(|r| r.body.iter())
                        .filter(|l| l.positive && self.sets[l.atom as usize].is_none())
                        .map(|l| l.atom)
                        .collect()
                };
                if pending.is_empty() {
                    self.sets[x as usize] = Some(self.compute(g, x));
                    stack.pop();
                } else {
                    stack.extend(pending);
                }
            }
        }
        self.sets[a as usize].as_deref().unwrap_or_default()
    }

    fn trivial(g: &GroundProgram, a: AtomId) -> bool {
        g.prob(a).is_some() || !g.has_rules(a)
    }

    fn compute(&self, g: &GroundProgram, a: AtomId) -> Vec<Lit> {
        if Self::trivial(g, a) {
            return Vec::new();
        }
        let mut acc: Option<Vec<Lit>> = None;
        for r in g.rules_for(a) {
            let mut closure = r.body.clone();
            closure.sort_unstable();
            closure.dedup();
            for l in r.body.iter().filter(|l| l.positive) {
                closure = merge_sorted(&closure, self.sets[l.atom as usize].as_deref().unwrap_or_default());
            }
            if !sorted_lits_consistent(&g.table, &closure) {
                continue;
            }
            acc = Some(match acc {
                None => closure,
                Some(prev) => prev.into_iter().filter(|l| closure.binary_search(l).is_ok()).collect(),
            });
            if acc.as_ref().is_some_and(Vec::is_empty) {
                break;
            }
        }
        let mut lits = acc.unwrap_or_default();
        lits.truncate(IMPLIED_CAP);
        lits
    }
}

/// Union of two ascending, duplicate-free slices.
fn merge_sorted(a: &[Lit], b: &[Lit]) -> Vec<Lit> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

struct Ve<'g> {
    g: &'g GroundProgram,
    opts: VeOptions,
    implied: Implied,
    cache: FxHashMap<Vec<Lit>, f64>,
    stats: VeStats,
    uses: FxHashMap<AtomId, u32>,
}

impl Ve<'_> {
    /// Sorted by decreasing rank, a negative literal before the positive one of the same
    /// atom; duplicates removed.
    fn canonical(&self, mut q: Vec<Lit>) -> Vec<Lit> {
        q.sort_unstable_by_key(|l| (Reverse(self.g.rank(l.atom)), l.atom, l.positive));
        q.dedup();
        q
    }

    fn with(&self, rest: &[Lit], extra: &[Lit]) -> Vec<Lit> {
        let mut q = Vec::with_capacity(rest.len() + extra.len());
        q.extend_from_slice(rest);
        q.extend_from_slice(extra);
        self.canonical(q)
    }

    /// `q` together with the literals its positive atoms imply is consistent.
    fn consistent(&mut self, q: &[Lit]) -> bool {
        if !lits_consistent(&self.g.table, q) {
            return false;
        }
        let mut all = q.to_vec();
        all.sort_unstable();
        all.dedup();
        let mut grew = false;
        for l in q.iter().filter(|l| l.positive) {
            let implied = self.implied.get(self.g, l.atom);
            if !implied.is_empty() {
                all = merge_sorted(&all, implied);
                grew = true;
            }
        }
        !grew || sorted_lits_consistent(&self.g.table, &all)
    }

    fn inner(&mut self, q: Vec<Lit>) -> f64 {
        stacker::maybe_grow(64 * 1024, 4 * 1024 * 1024, || self.inner_frame(q))
    }

    fn inner_frame(&mut self, q: Vec<Lit>) -> f64 {
        if q.is_empty() {
            return 1.0;
        }
        if self.opts.pruning && !self.consistent(&q) {
            self.stats.prunes += 1;
            return 0.0;
        }
        if self.opts.caching {
            if let Some(&p) = self.cache.get(&q) {
                self.stats.cache_hits += 1;
                return p;
            }
        }
        if self.opts.max_expansions > 0 && self.stats.expansions >= self.opts.max_expansions {
            self.stats.exhausted = true;
            return 0.0;
        }
        self.stats.expansions += 1;
        let l = q[0];
        let rest = &q[1..];
        let a = l.atom;
        let result = if !l.positive {
            let with_a = self.with(rest, &[Lit::pos(a)]);
            if (!self.g.has_rules(a) && self.g.prob(a).is_none()) || (self.opts.pruning && !self.consistent(&with_a)) {
                self.inner(rest.to_vec())
            } else {
                self.inner(rest.to_vec()) - self.inner(with_a)
            }
        } else if let Some(p) = self.g.prob(a) {
            if self.opts.instrument {
                let n = self.uses.entry(a).or_default();
                *n += 1;
                self.stats.max_fact_uses = self.stats.max_fact_uses.max(*n);
            }
            let r = p * self.inner(rest.to_vec());
            if self.opts.instrument {
                *self.uses.get_mut(&a).unwrap() -= 1;
            }
            r
        } else {
            let g = self.g;
            let mut sum = 0.0;
            for rule in g.rules_for(a) {
                let sub = self.with(rest, &rule.body);
                sum += self.inner(sub);
            }
            sum
        };
        if self.opts.caching {
            self.cache.insert(q, result);
        }
        result
    }
}
