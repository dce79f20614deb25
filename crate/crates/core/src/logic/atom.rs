use std::collections::BTreeSet;
use std::fmt;

use super::term::{write_args, write_name, Sym, Term};

/// Built-in comparison operators usable as body atoms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Cmp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Neq,
}

impl Cmp {
    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Gt => ">",
            Cmp::Ge => ">=",
            Cmp::Eq => "=",
            Cmp::Neq => "\\=",
        }
    }

    pub fn from_symbol(s: &str) -> Option<Cmp> {
        Some(match s {
            "<" => Cmp::Lt,
            "<=" | "=<" => Cmp::Le,
            ">" => Cmp::Gt,
            ">=" => Cmp::Ge,
            "=" => Cmp::Eq,
            "\\=" => Cmp::Neq,
            _ => return None,
        })
    }

    /// The operator with its operands swapped: `a op b` iff `b op.flip() a`.
    pub fn flip(self) -> Cmp {
        match self {
            Cmp::Lt => Cmp::Gt,
            Cmp::Le => Cmp::Ge,
            Cmp::Gt => Cmp::Lt,
            Cmp::Ge => Cmp::Le,
            other => other,
        }
    }
}

/// Atoms carry their time term as a dedicated field; built-ins are untimed.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Atom {
    Ordinary {
        pred: Sym,
        args: Vec<Term>,
        time: Term,
    },
    Equation {
        func: Sym,
        args: Vec<Term>,
        rhs: Term,
        time: Term,
    },
    Builtin {
        op: Cmp,
        lhs: Term,
        rhs: Term,
    },
}

/// Predicate signature used for indexing. Equations are keyed by their left-hand functor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PredSig {
    pub name: Sym,
    pub arity: usize,
    pub equation: bool,
}

impl Atom {
    pub fn ordinary(pred: &str, args: Vec<Term>, time: Term) -> Atom {
        Atom::Ordinary {
            pred: super::sym(pred),
            args,
            time,
        }
    }

    pub fn equation(func: &str, args: Vec<Term>, rhs: Term, time: Term) -> Atom {
        Atom::Equation {
            func: super::sym(func),
            args,
            rhs,
            time,
        }
    }

    pub fn builtin(op: Cmp, lhs: Term, rhs: Term) -> Atom {
        Atom::Builtin { op, lhs, rhs }
    }

    pub fn is_builtin(&self) -> bool {
        matches!(self, Atom::Builtin { .. })
    }

    pub fn is_equation(&self) -> bool {
        matches!(self, Atom::Equation { .. })
    }

    pub fn time(&self) -> Option<&Term> {
        match self {
            Atom::Ordinary { time, .. } | Atom::Equation { time, .. } => Some(time),
            Atom::Builtin { .. } => None,
        }
    }

    /// The evaluated integer time of a ground timed atom.
    pub fn time_value(&self) -> Option<i64> {
        match self.time() {
            Some(Term::Int(t)) => Some(*t),
            _ => None,
        }
    }

    /// Predicate symbol for stratification: the predicate of an ordinary atom or the
    /// left-hand functor of an equation.
    pub fn pred_name(&self) -> Option<&Sym> {
        match self {
            Atom::Ordinary { pred, .. } => Some(pred),
            Atom::Equation { func, .. } => Some(func),
            Atom::Builtin { .. } => None,
        }
    }

    pub fn signature(&self) -> Option<PredSig> {
        match self {
            Atom::Ordinary { pred, args, .. } => Some(PredSig {
                name: pred.clone(),
                arity: args.len(),
                equation: false,
            }),
            Atom::Equation { func, args, .. } => Some(PredSig {
                name: func.clone(),
                arity: args.len(),
                equation: true,
            }),
            Atom::Builtin { .. } => None,
        }
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<Sym>) {
        match self {
            Atom::Ordinary { args, time, .. } => {
                args.iter().for_each(|a| a.collect_vars(out));
                time.collect_vars(out);
            }
            Atom::Equation { args, rhs, time, .. } => {
                args.iter().for_each(|a| a.collect_vars(out));
                rhs.collect_vars(out);
                time.collect_vars(out);
            }
            Atom::Builtin { lhs, rhs, .. } => {
                lhs.collect_vars(out);
                rhs.collect_vars(out);
            }
        }
    }

    pub fn vars(&self) -> BTreeSet<Sym> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Atom::Ordinary { args, time, .. } => args.iter().all(Term::is_ground) && time.is_ground(),
            Atom::Equation { args, rhs, time, .. } => {
                args.iter().all(Term::is_ground) && rhs.is_ground() && time.is_ground()
            }
            Atom::Builtin { lhs, rhs, .. } => lhs.is_ground() && rhs.is_ground(),
        }
    }
}

fn write_functional(f: &mut fmt::Formatter<'_>, name: &str, args: &[Term]) -> fmt::Result {
    write_name(f, name)?;
    if !args.is_empty() {
        f.write_str("(")?;
        write_args(f, args)?;
        f.write_str(")")?;
    }
    Ok(())
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Ordinary { pred, args, time } => {
                write_functional(f, pred, args)?;
                write!(f, " @ {time}")
            }
            Atom::Equation { func, args, rhs, time } => {
                write_functional(f, func, args)?;
                write!(f, " = {rhs} @ {time}")
            }
            Atom::Builtin { op, lhs, rhs } => write!(f, "{lhs} {} {rhs}", op.symbol()),
        }
    }
}

/// A signed atom.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atom,
}

impl Literal {
    pub fn pos(atom: Atom) -> Literal {
        Literal { positive: true, atom }
    }

    pub fn neg(atom: Atom) -> Literal {
        Literal { positive: false, atom }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.positive {
            write!(f, "{}", self.atom)
        } else {
            write!(f, "-{}", self.atom)
        }
    }
}
