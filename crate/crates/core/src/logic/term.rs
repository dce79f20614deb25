use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use ordered_float::OrderedFloat;

/// Interned-by-sharing symbol used for functors, predicates and variable names.
pub type Sym = Arc<str>;

pub fn sym(s: &str) -> Sym {
    Arc::from(s)
}

/// A first-order term. Constants are `App` nodes with no arguments; arithmetic and
/// list operators are `App` nodes with an interpreted functor (see [`is_interpreted`]).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Sym),
    Int(i64),
    Real(OrderedFloat<f64>),
    App(Sym, Vec<Term>),
    List(Vec<Term>),
    Range(Box<Term>, Box<Term>),
}

const BINARY_OPS: [&str; 6] = ["+", "-", "*", "/", "++", "--"];

/// True for functors evaluated by [`crate::logic::eval_term`].
pub fn is_interpreted(functor: &str, arity: usize) -> bool {
    match arity {
        2 => BINARY_OPS.contains(&functor),
        1 => functor == "-",
        _ => false,
    }
}

impl Term {
    pub fn var(name: &str) -> Term {
        Term::Var(sym(name))
    }

    pub fn constant(name: &str) -> Term {
        Term::App(sym(name), Vec::new())
    }

    pub fn app(name: &str, args: Vec<Term>) -> Term {
        Term::App(sym(name), args)
    }

    pub fn real(value: f64) -> Term {
        Term::Real(OrderedFloat(value))
    }

    pub fn binary(op: &str, lhs: Term, rhs: Term) -> Term {
        Term::App(sym(op), vec![lhs, rhs])
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Int(_) | Term::Real(_) => true,
            Term::App(_, args) | Term::List(args) => args.iter().all(Term::is_ground),
            Term::Range(lo, hi) => lo.is_ground() && hi.is_ground(),
        }
    }

    pub fn is_number(&self) -> bool {
        matches!(self, Term::Int(_) | Term::Real(_))
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Term::Int(i) => Some(*i as f64),
            Term::Real(r) => Some(r.0),
            _ => None,
        }
    }

    /// An ordinary functional term: a compound or constant whose functor is not interpreted.
    pub fn is_ordinary_functional(&self) -> bool {
        matches!(self, Term::App(f, args) if !is_interpreted(f, args.len()))
    }

    pub fn is_interpreted_app(&self) -> bool {
        matches!(self, Term::App(f, args) if is_interpreted(f, args.len()))
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Sym>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Int(_) | Term::Real(_) => {}
            Term::App(_, args) | Term::List(args) => {
                for a in args {
                    a.collect_vars(out);
                }
            }
            Term::Range(lo, hi) => {
                lo.collect_vars(out);
                hi.collect_vars(out);
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<Sym> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }
}

fn is_plain_name(name: &str) -> bool {
    let mut chars = name.chars();
    match chars.next() {
        Some(c) if c.is_ascii_lowercase() || c == '$' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub(crate) fn write_name(f: &mut fmt::Formatter<'_>, name: &str) -> fmt::Result {
    if is_plain_name(name) {
        f.write_str(name)
    } else {
        write!(f, "'{}'", name.replace('\'', "\\'"))
    }
}

pub(crate) fn write_args(f: &mut fmt::Formatter<'_>, args: &[Term]) -> fmt::Result {
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{a}")?;
    }
    Ok(())
}

fn write_operand(f: &mut fmt::Formatter<'_>, t: &Term) -> fmt::Result {
    let needs_parens =
        t.is_interpreted_app() || matches!(t, Term::Int(i) if *i < 0) || matches!(t, Term::Real(r) if r.0 < 0.0);
    if needs_parens {
        write!(f, "({t})")
    } else {
        write!(f, "{t}")
    }
}

pub(crate) fn write_real(f: &mut fmt::Formatter<'_>, r: f64) -> fmt::Result {
    // Debug formatting keeps a fractional part (`1.0`) so the value re-reads as a real.
    write!(f, "{r:?}")
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => f.write_str(v),
            Term::Int(i) => write!(f, "{i}"),
            Term::Real(r) => write_real(f, r.0),
            Term::App(op, args) if is_interpreted(op, args.len()) => {
                if args.len() == 1 {
                    f.write_str("-")?;
                    write_operand(f, &args[0])
                } else {
                    write_operand(f, &args[0])?;
                    f.write_str(op)?;
                    write_operand(f, &args[1])
                }
            }
            Term::App(name, args) => {
                write_name(f, name)?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    write_args(f, args)?;
                    f.write_str(")")?;
                }
                Ok(())
            }
            Term::List(items) => {
                f.write_str("[")?;
                write_args(f, items)?;
                f.write_str("]")
            }
            Term::Range(lo, hi) => write!(f, "[{lo}..{hi}]"),
        }
    }
}
