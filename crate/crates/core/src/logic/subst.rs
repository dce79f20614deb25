use std::collections::BTreeMap;
use std::fmt;

use super::atom::{Atom, Literal};
use super::rule::{Body, Head, Rule};
use super::term::{Sym, Term};

/// Finite map from variable names to terms. Bindings produced by matching are ground,
/// which makes application idempotent.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Substitution {
    bindings: BTreeMap<Sym, Term>,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn bind(&mut self, var: Sym, value: Term) {
        self.bindings.insert(var, value);
    }

    pub fn with(mut self, var: &str, value: Term) -> Self {
        self.bind(super::sym(var), value);
        self
    }

    pub fn get(&self, var: &str) -> Option<&Term> {
        self.bindings.get(var)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Sym, &Term)> {
        self.bindings.iter()
    }

    /// Keep only the bindings of the given variables.
    pub fn restrict<'a>(&self, vars: impl IntoIterator<Item = &'a Sym>) -> Substitution {
        let mut out = Substitution::new();
        for v in vars {
            if let Some(t) = self.bindings.get(v) {
                out.bind(v.clone(), t.clone());
            }
        }
        out
    }

    pub fn apply<T: Substitutable>(&self, e: &T) -> T {
        e.apply_subst(self)
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (k, v)) in self.bindings.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k} = {v}")?;
        }
        f.write_str("}")
    }
}

/// Syntactic objects a [`Substitution`] can be applied to. Application never evaluates
/// interpreted subterms.
pub trait Substitutable: Sized {
    fn apply_subst(&self, s: &Substitution) -> Self;
}

impl Substitutable for Term {
    fn apply_subst(&self, s: &Substitution) -> Term {
        match self {
            Term::Var(v) => s.bindings.get(v).cloned().unwrap_or_else(|| self.clone()),
            Term::Int(_) | Term::Real(_) => self.clone(),
            Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| a.apply_subst(s)).collect()),
            Term::List(items) => Term::List(items.iter().map(|a| a.apply_subst(s)).collect()),
            Term::Range(lo, hi) => Term::Range(Box::new(lo.apply_subst(s)), Box::new(hi.apply_subst(s))),
        }
    }
}

impl<T: Substitutable> Substitutable for Vec<T> {
    fn apply_subst(&self, s: &Substitution) -> Self {
        self.iter().map(|x| x.apply_subst(s)).collect()
    }
}

impl Substitutable for Atom {
    fn apply_subst(&self, s: &Substitution) -> Atom {
        match self {
            Atom::Ordinary { pred, args, time } => Atom::Ordinary {
                pred: pred.clone(),
                args: args.apply_subst(s),
                time: time.apply_subst(s),
            },
            Atom::Equation { func, args, rhs, time } => Atom::Equation {
                func: func.clone(),
                args: args.apply_subst(s),
                rhs: rhs.apply_subst(s),
                time: time.apply_subst(s),
            },
            Atom::Builtin { op, lhs, rhs } => Atom::Builtin {
                op: *op,
                lhs: lhs.apply_subst(s),
                rhs: rhs.apply_subst(s),
            },
        }
    }
}

impl Substitutable for Literal {
    fn apply_subst(&self, s: &Substitution) -> Literal {
        Literal {
            positive: self.positive,
            atom: self.atom.apply_subst(s),
        }
    }
}

impl Substitutable for Head {
    fn apply_subst(&self, s: &Substitution) -> Head {
        match self {
            Head::Ordinary { prob, atom } => Head::Ordinary {
                prob: prob.apply_subst(s),
                atom: atom.apply_subst(s),
            },
            Head::Distribution {
                func,
                args,
                support,
                time,
            } => Head::Distribution {
                func: func.clone(),
                args: args.apply_subst(s),
                support: support.apply_subst(s),
                time: time.apply_subst(s),
            },
            Head::Sum(items) => Head::Sum(
                items
                    .iter()
                    .map(|(p, a)| (p.apply_subst(s), a.apply_subst(s)))
                    .collect(),
            ),
        }
    }
}

impl Substitutable for Body {
    fn apply_subst(&self, s: &Substitution) -> Body {
        Body {
            positives: self.positives.apply_subst(s),
            negatives: self.negatives.apply_subst(s),
        }
    }
}

impl Substitutable for Rule {
    fn apply_subst(&self, s: &Substitution) -> Rule {
        Rule {
            head: self.head.apply_subst(s),
            body: self.body.apply_subst(s),
        }
    }
}
