use thiserror::Error;

use super::atom::{Atom, Cmp};
use super::term::{is_interpreted, Term};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvalError {
    #[error("cannot evaluate non-ground term {0}")]
    NonGround(String),
    #[error("ill-sorted term {0}")]
    IllSorted(String),
    #[error("operands of {0} are not comparable")]
    NotComparable(String),
    #[error("division by zero in {0}")]
    DivisionByZero(String),
    #[error("integer overflow in {0}")]
    Overflow(String),
}

fn num_op(op: &str, a: &Term, b: &Term, whole: &Term) -> Result<Term, EvalError> {
    let ill = || EvalError::IllSorted(whole.to_string());
    match (a, b) {
        (Term::Int(x), Term::Int(y)) => {
            let (x, y) = (*x, *y);
            let overflow = || EvalError::Overflow(whole.to_string());
            Ok(match op {
                "+" => Term::Int(x.checked_add(y).ok_or_else(overflow)?),
                "-" => Term::Int(x.checked_sub(y).ok_or_else(overflow)?),
                "*" => Term::Int(x.checked_mul(y).ok_or_else(overflow)?),
                "/" => {
                    if y == 0 {
                        return Err(EvalError::DivisionByZero(whole.to_string()));
                    }
                    if x % y == 0 {
                        Term::Int(x / y)
                    } else {
                        Term::real(x as f64 / y as f64)
                    }
                }
                _ => return Err(ill()),
            })
        }
        _ => {
            let x = a.as_f64().ok_or_else(ill)?;
            let y = b.as_f64().ok_or_else(ill)?;
            Ok(Term::real(match op {
                "+" => x + y,
                "-" => x - y,
                "*" => x * y,
                "/" => {
                    if y == 0.0 {
                        return Err(EvalError::DivisionByZero(whole.to_string()));
                    }
                    x / y
                }
                _ => return Err(ill()),
            }))
        }
    }
}

/// Reduce a ground term to its irreducible form: arithmetic, `++`, `--` and ranges.
pub fn eval_term(t: &Term) -> Result<Term, EvalError> {
    match t {
        Term::Var(_) => Err(EvalError::NonGround(t.to_string())),
        Term::Int(_) | Term::Real(_) => Ok(t.clone()),
        Term::App(op, args) if is_interpreted(op, args.len()) => {
            if args.len() == 1 {
                return match eval_term(&args[0])? {
                    Term::Int(i) => Ok(Term::Int(-i)),
                    Term::Real(r) => Ok(Term::real(-r.0)),
                    _ => Err(EvalError::IllSorted(t.to_string())),
                };
            }
            let a = eval_term(&args[0])?;
            let b = eval_term(&args[1])?;
            match &**op {
                "++" => match (a, b) {
                    (Term::List(mut xs), Term::List(ys)) => {
                        xs.extend(ys);
                        Ok(Term::List(xs))
                    }
                    _ => Err(EvalError::IllSorted(t.to_string())),
                },
                "--" => match (a, b) {
                    (Term::List(mut xs), Term::List(ys)) => {
                        for y in &ys {
                            if let Some(pos) = xs.iter().position(|x| x == y) {
                                xs.remove(pos);
                            }
                        }
                        Ok(Term::List(xs))
                    }
                    _ => Err(EvalError::IllSorted(t.to_string())),
                },
                _ => num_op(op, &a, &b, t),
            }
        }
        Term::App(f, args) => Ok(Term::App(
            f.clone(),
            args.iter().map(eval_term).collect::<Result<_, _>>()?,
        )),
        Term::List(items) => Ok(Term::List(items.iter().map(eval_term).collect::<Result<_, _>>()?)),
        Term::Range(lo, hi) => match (eval_term(lo)?, eval_term(hi)?) {
            (Term::Int(l), Term::Int(h)) => Ok(Term::List((l..=h).map(Term::Int).collect())),
            _ => Err(EvalError::IllSorted(t.to_string())),
        },
    }
}

fn terms_equal(a: &Term, b: &Term) -> bool {
    match (a.as_f64(), b.as_f64()) {
        (Some(x), Some(y)) => x == y,
        _ => a == b,
    }
}

/// Evaluate a ground comparison. `=` and `\=` compare evaluated terms syntactically
/// (numbers by value); ordering operators require numeric operands.
pub fn eval_builtin(op: Cmp, lhs: &Term, rhs: &Term) -> Result<bool, EvalError> {
    let a = eval_term(lhs)?;
    let b = eval_term(rhs)?;
    match op {
        Cmp::Eq => Ok(terms_equal(&a, &b)),
        Cmp::Neq => Ok(!terms_equal(&a, &b)),
        _ => {
            let ord = match (&a, &b) {
                (Term::Int(x), Term::Int(y)) => x.cmp(y),
                _ => {
                    let not_comparable = || EvalError::NotComparable(format!("{a} {} {b}", op.symbol()));
                    let x = a.as_f64().ok_or_else(not_comparable)?;
                    let y = b.as_f64().ok_or_else(not_comparable)?;
                    x.partial_cmp(&y).ok_or_else(not_comparable)?
                }
            };
            Ok(match op {
                Cmp::Lt => ord.is_lt(),
                Cmp::Le => ord.is_le(),
                Cmp::Gt => ord.is_gt(),
                Cmp::Ge => ord.is_ge(),
                Cmp::Eq | Cmp::Neq => unreachable!(),
            })
        }
    }
}

/// Evaluate a ground built-in atom.
pub fn eval_builtin_atom(a: &Atom) -> Result<bool, EvalError> {
    match a {
        Atom::Builtin { op, lhs, rhs } => eval_builtin(*op, lhs, rhs),
        other => Err(EvalError::IllSorted(other.to_string())),
    }
}

/// Evaluate every term of a ground timed atom (arguments, right-hand side, time).
pub fn eval_atom(a: &Atom) -> Result<Atom, EvalError> {
    Ok(match a {
        Atom::Ordinary { pred, args, time } => Atom::Ordinary {
            pred: pred.clone(),
            args: args.iter().map(eval_term).collect::<Result<_, _>>()?,
            time: eval_time(time)?,
        },
        Atom::Equation { func, args, rhs, time } => Atom::Equation {
            func: func.clone(),
            args: args.iter().map(eval_term).collect::<Result<_, _>>()?,
            rhs: eval_term(rhs)?,
            time: eval_time(time)?,
        },
        Atom::Builtin { op, lhs, rhs } => Atom::Builtin {
            op: *op,
            lhs: eval_term(lhs)?,
            rhs: eval_term(rhs)?,
        },
    })
}

fn eval_time(t: &Term) -> Result<Term, EvalError> {
    match eval_term(t)? {
        Term::Int(i) => Ok(Term::Int(i)),
        other => Err(EvalError::IllSorted(format!("time term {other}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn list(items: Vec<Term>) -> Term {
        Term::List(items)
    }

    fn ball(c: &str, i: i64) -> Term {
        Term::app(c, vec![Term::Int(i)])
    }

    #[test]
    fn arithmetic() {
        assert_eq!(
            eval_term(&Term::binary("+", Term::Int(1), Term::Int(1))),
            Ok(Term::Int(2))
        );
        assert_eq!(
            eval_term(&Term::binary("/", Term::Int(1), Term::Int(4))),
            Ok(Term::real(0.25))
        );
        assert_eq!(
            eval_term(&Term::binary("/", Term::Int(6), Term::Int(3))),
            Ok(Term::Int(2))
        );
        assert!(matches!(
            eval_term(&Term::binary("+", Term::constant("a"), Term::Int(1))),
            Err(EvalError::IllSorted(_))
        ));
    }

    #[test]
    fn list_difference_removes_one_occurrence() {
        let urn = list(vec![ball("r", 1), ball("r", 2), ball("g", 1)]);
        let t = Term::binary("--", urn, list(vec![ball("r", 2)]));
        assert_eq!(eval_term(&t), Ok(list(vec![ball("r", 1), ball("g", 1)])));
        let dup = Term::binary("--", list(vec![Term::Int(1), Term::Int(1)]), list(vec![Term::Int(1)]));
        assert_eq!(eval_term(&dup), Ok(list(vec![Term::Int(1)])));
    }

    #[test]
    fn ranges() {
        let r = Term::Range(Box::new(Term::Int(0)), Box::new(Term::Int(5)));
        assert_eq!(eval_term(&r), Ok(list((0..=5).map(Term::Int).collect())));
        let empty = Term::Range(Box::new(Term::Int(3)), Box::new(Term::Int(2)));
        assert_eq!(eval_term(&empty), Ok(list(vec![])));
    }

    #[test]
    fn builtins() {
        assert_eq!(eval_builtin(Cmp::Lt, &Term::Int(1), &Term::Int(2)), Ok(true));
        assert_eq!(eval_builtin(Cmp::Neq, &list(vec![]), &list(vec![])), Ok(false));
        assert_eq!(
            eval_builtin(Cmp::Neq, &list(vec![ball("r", 1)]), &list(vec![])),
            Ok(true)
        );
        assert!(eval_builtin(Cmp::Lt, &Term::constant("a"), &Term::Int(2)).is_err());
    }
}
