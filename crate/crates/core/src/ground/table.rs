use std::fmt;

use rustc_hash::FxHashMap;

use crate::logic::{Atom, PredSig, Sym, Term};
use crate::strat::TimedStratum;

pub type AtomId = u32;

/// A ground literal over interned atoms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lit {
    pub atom: AtomId,
    pub positive: bool,
}

impl Lit {
    pub fn pos(atom: AtomId) -> Lit {
        Lit { atom, positive: true }
    }

    pub fn neg(atom: AtomId) -> Lit {
        Lit { atom, positive: false }
    }

    pub fn negate(self) -> Lit {
        Lit {
            atom: self.atom,
            positive: !self.positive,
        }
    }
}

/// Interned ground atoms with their timed strata. Equations additionally get a key for
/// their left-hand side and time, so that right-uniqueness checks are id comparisons.
#[derive(Clone, Debug, Default)]
pub struct AtomTable {
    atoms: Vec<Atom>,
    index: FxHashMap<Atom, AtomId>,
    strata: Vec<TimedStratum>,
    eq_key: Vec<Option<u32>>,
    eq_keys: FxHashMap<(Sym, Vec<Term>, Term), u32>,
}

impl AtomTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn get(&self, atom: &Atom) -> Option<AtomId> {
        self.index.get(atom).copied()
    }

    /// Intern `atom` (ground, evaluated). The stratum is recorded on first insertion.
    pub fn intern(&mut self, atom: Atom, strat: TimedStratum) -> AtomId {
        if let Some(&id) = self.index.get(&atom) {
            return id;
        }
        let id = self.atoms.len() as AtomId;
        let key = match &atom {
            Atom::Equation { func, args, time, .. } => {
                let next = self.eq_keys.len() as u32;
                Some(
                    *self
                        .eq_keys
                        .entry((func.clone(), args.clone(), time.clone()))
                        .or_insert(next),
                )
            }
            _ => None,
        };
        self.index.insert(atom.clone(), id);
        self.atoms.push(atom);
        self.strata.push(strat);
        self.eq_key.push(key);
        id
    }

    pub fn atom(&self, id: AtomId) -> &Atom {
        &self.atoms[id as usize]
    }

    pub fn strat(&self, id: AtomId) -> TimedStratum {
        self.strata[id as usize]
    }

    pub fn eq_key(&self, id: AtomId) -> Option<u32> {
        self.eq_key[id as usize]
    }

    pub fn signature(&self, id: AtomId) -> PredSig {
        self.atoms[id as usize]
            .signature()
            .expect("interned atoms are ordinary or equations")
    }

    pub fn ids(&self) -> impl Iterator<Item = AtomId> {
        0..self.atoms.len() as AtomId
    }

    pub fn lit(&self, l: Lit) -> LitDisplay<'_> {
        LitDisplay { table: self, lit: l }
    }
}

pub struct LitDisplay<'a> {
    table: &'a AtomTable,
    lit: Lit,
}

impl fmt::Display for LitDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.lit.positive {
            f.write_str("-")?;
        }
        write!(f, "{}", self.table.atom(self.lit.atom))
    }
}

/// Incremental consistency checking for a growing set of literals: complementary pairs
/// and pairs of positive equations with the same left-hand side and time but different
/// right-hand sides are inconsistent.
#[derive(Clone, Debug, Default)]
pub struct LitSet {
    signs: FxHashMap<AtomId, bool>,
    eqs: FxHashMap<u32, AtomId>,
    order: Vec<Lit>,
    conflict: bool,
}

impl LitSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_lits(table: &AtomTable, lits: impl IntoIterator<Item = Lit>) -> Self {
        let mut s = Self::new();
        for l in lits {
            s.insert(table, l);
        }
        s
    }

    /// Add a literal; returns true if it was new.
    pub fn insert(&mut self, table: &AtomTable, l: Lit) -> bool {
        match self.signs.get(&l.atom) {
            Some(&s) if s == l.positive => return false,
            Some(_) => self.conflict = true,
            None => {
                self.signs.insert(l.atom, l.positive);
            }
        }
        if l.positive {
            if let Some(k) = table.eq_key(l.atom) {
                match self.eqs.get(&k) {
                    Some(&other) if other != l.atom => self.conflict = true,
                    Some(_) => {}
                    None => {
                        self.eqs.insert(k, l.atom);
                    }
                }
            }
        }
        self.order.push(l);
        true
    }

    pub fn contains(&self, l: Lit) -> bool {
        self.signs.get(&l.atom) == Some(&l.positive)
    }

    pub fn is_consistent(&self) -> bool {
        !self.conflict
    }

    /// Literals in insertion order.
    pub fn lits(&self) -> &[Lit] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// Whether `l` can be added without making the set inconsistent.
    pub fn admits(&self, table: &AtomTable, l: Lit) -> bool {
        if self.signs.get(&l.atom).is_some_and(|&s| s != l.positive) {
            return false;
        }
        if l.positive {
            if let Some(k) = table.eq_key(l.atom) {
                if self.eqs.get(&k).is_some_and(|&other| other != l.atom) {
                    return false;
                }
            }
        }
        true
    }

    /// Whether this set together with `body` is consistent (the body is checked against
    /// the set and against itself).
    pub fn consistent_with(&self, table: &AtomTable, body: &[Lit]) -> bool {
        if self.conflict {
            return false;
        }
        if !body.iter().all(|&l| self.admits(table, l)) {
            return false;
        }
        lits_consistent(table, body)
    }
}

/// Consistency of a single set of literals.
pub fn lits_consistent(table: &AtomTable, lits: &[Lit]) -> bool {
    if lits.len() < 2 {
        return true;
    }
    if lits.len() <= 8 {
        for (i, a) in lits.iter().enumerate() {
            for b in &lits[i + 1..] {
                if a.atom == b.atom {
                    if a.positive != b.positive {
                        return false;
                    }
                } else if a.positive && b.positive {
                    if let (Some(x), Some(y)) = (table.eq_key(a.atom), table.eq_key(b.atom)) {
                        if x == y {
                            return false;
                        }
                    }
                }
            }
        }
        return true;
    }
    let mut sorted: Vec<Lit> = lits.to_vec();
    sorted.sort_unstable();
    sorted_lits_consistent(table, &sorted)
}

/// [`lits_consistent`] for literals already in ascending order.
pub fn sorted_lits_consistent(table: &AtomTable, by_atom: &[Lit]) -> bool {
    if by_atom
        .windows(2)
        .any(|w| w[0].atom == w[1].atom && w[0].positive != w[1].positive)
    {
        return false;
    }
    let mut keys: Vec<(u32, AtomId)> = by_atom
        .iter()
        .filter(|l| l.positive)
        .filter_map(|l| table.eq_key(l.atom).map(|k| (k, l.atom)))
        .collect();
    keys.sort_unstable();
    !keys.windows(2).any(|w| w[0].0 == w[1].0 && w[0].1 != w[1].1)
}
