use std::collections::BTreeSet;
use std::fmt;

use super::atom::Atom;
use super::term::{write_args, write_name, write_real, Sym, Term};

/// Rule heads. Sum heads share one time term across their alternatives.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Head {
    /// `pr :: a @ tt`; `a @ tt` alone means probability `1.0`.
    Ordinary { prob: Term, atom: Atom },
    /// `f(args) ~ support @ tt`.
    Distribution {
        func: Sym,
        args: Vec<Term>,
        support: Term,
        time: Term,
    },
    /// `pr1 :: a1 @ tt + ... + prm :: am @ tt`.
    Sum(Vec<(Term, Atom)>),
}

impl Head {
    pub fn time(&self) -> &Term {
        match self {
            Head::Ordinary { atom, .. } => atom.time().expect("head atoms are timed"),
            Head::Distribution { time, .. } => time,
            Head::Sum(items) => items[0].1.time().expect("head atoms are timed"),
        }
    }

    /// Predicate symbols defined by this head.
    pub fn preds(&self) -> Vec<Sym> {
        match self {
            Head::Ordinary { atom, .. } => atom.pred_name().cloned().into_iter().collect(),
            Head::Distribution { func, .. } => vec![func.clone()],
            Head::Sum(items) => {
                let mut out: Vec<Sym> = Vec::new();
                for (_, a) in items {
                    if let Some(p) = a.pred_name() {
                        if !out.contains(p) {
                            out.push(p.clone());
                        }
                    }
                }
                out
            }
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Sym>) {
        match self {
            Head::Ordinary { prob, atom } => {
                prob.collect_vars(out);
                atom.collect_vars(out);
            }
            Head::Distribution {
                args, support, time, ..
            } => {
                args.iter().for_each(|a| a.collect_vars(out));
                support.collect_vars(out);
                time.collect_vars(out);
            }
            Head::Sum(items) => {
                for (p, a) in items {
                    p.collect_vars(out);
                    a.collect_vars(out);
                }
            }
        }
    }
}

/// A rule body: positive atoms (ordinary, equations and built-ins) and negative
/// body elements `\+ (c1, ..., ck)`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Body {
    pub positives: Vec<Atom>,
    pub negatives: Vec<Vec<Atom>>,
}

impl Body {
    pub fn is_empty(&self) -> bool {
        self.positives.is_empty() && self.negatives.is_empty()
    }

    /// Variables of the positive, non-built-in part (the body's bound variables).
    pub fn bound_vars(&self) -> BTreeSet<Sym> {
        let mut out = BTreeSet::new();
        for a in self.positives.iter().filter(|a| !a.is_builtin()) {
            a.collect_vars(&mut out);
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Rule {
    pub head: Head,
    pub body: Body,
}

impl Rule {
    pub fn fact(head: Head) -> Rule {
        Rule {
            head,
            body: Body::default(),
        }
    }

    pub fn is_fact(&self) -> bool {
        self.body.is_empty()
    }

    /// The first variable violating range restriction: a head variable, or a variable of a
    /// positive built-in, that no positive ordinary atom binds.
    pub fn range_violation(&self) -> Option<Sym> {
        let bound = self.body.bound_vars();
        let mut needed = BTreeSet::new();
        self.head.collect_vars(&mut needed);
        for a in self.body.positives.iter().filter(|a| a.is_builtin()) {
            a.collect_vars(&mut needed);
        }
        needed.into_iter().find(|v| !bound.contains(v))
    }
}

fn write_prob(f: &mut fmt::Formatter<'_>, prob: &Term) -> fmt::Result {
    match prob {
        Term::Real(r) => write_real(f, r.0),
        Term::App(_, args) if args.len() == 2 => write!(f, "({prob})"),
        other => write!(f, "{other}"),
    }
}

impl fmt::Display for Head {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Head::Ordinary { prob, atom } => {
                if *prob != Term::real(1.0) {
                    write_prob(f, prob)?;
                    f.write_str(" :: ")?;
                }
                write!(f, "{atom}")
            }
            Head::Distribution {
                func,
                args,
                support,
                time,
            } => {
                write_name(f, func)?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    write_args(f, args)?;
                    f.write_str(")")?;
                }
                write!(f, " ~ {support} @ {time}")
            }
            Head::Sum(items) => {
                for (i, (p, a)) in items.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    write_prob(f, p)?;
                    write!(f, " :: {a}")?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Body {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        let mut sep = |f: &mut fmt::Formatter<'_>| {
            if !std::mem::replace(&mut first, false) {
                f.write_str(", ")
            } else {
                Ok(())
            }
        };
        for a in &self.positives {
            sep(f)?;
            write!(f, "{a}")?;
        }
        for element in &self.negatives {
            sep(f)?;
            f.write_str("\\+ (")?;
            for (i, a) in element.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.body.is_empty() {
            write!(f, "{}.", self.head)
        } else {
            write!(f, "{} :- {}.", self.head, self.body)
        }
    }
}
