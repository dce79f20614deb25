use super::atom::Atom;
use super::eval::eval_term;
use super::subst::Substitution;
use super::term::Term;

/// Match `pattern` against the ground, evaluated atom `fact`, returning the unique
/// grounding substitution, if any.
pub fn match_atom(pattern: &Atom, fact: &Atom) -> Option<Substitution> {
    let mut s = Substitution::new();
    match_atom_into(pattern, fact, &mut s).then_some(s)
}

/// Extend `subst` so that `pattern` matches `fact`. On failure `subst` may hold
/// partial bindings and should be discarded.
pub fn match_atom_into(pattern: &Atom, fact: &Atom, subst: &mut Substitution) -> bool {
    let mut deferred = Vec::new();
    let structural = match (pattern, fact) {
        (
            Atom::Ordinary { pred, args, time },
            Atom::Ordinary {
                pred: fp,
                args: fa,
                time: ft,
            },
        ) => {
            pred == fp
                && args.len() == fa.len()
                && match_term(time, ft, subst, &mut deferred)
                && args.iter().zip(fa).all(|(p, f)| match_term(p, f, subst, &mut deferred))
        }
        (
            Atom::Equation { func, args, rhs, time },
            Atom::Equation {
                func: ff,
                args: fa,
                rhs: fr,
                time: ft,
            },
        ) => {
            func == ff
                && args.len() == fa.len()
                && match_term(time, ft, subst, &mut deferred)
                && args.iter().zip(fa).all(|(p, f)| match_term(p, f, subst, &mut deferred))
                && match_term(rhs, fr, subst, &mut deferred)
        }
        _ => false,
    };
    structural && resolve_deferred(&deferred, subst)
}

/// Interpreted subterms cannot be inverted; they are checked once their variables are bound.
fn resolve_deferred(deferred: &[(&Term, &Term)], subst: &Substitution) -> bool {
    deferred.iter().all(|(p, f)| {
        let t = subst.apply(*p);
        t.is_ground() && eval_term(&t).map(|v| &v == *f).unwrap_or(false)
    })
}

fn match_term<'a>(
    p: &'a Term,
    f: &'a Term,
    subst: &mut Substitution,
    deferred: &mut Vec<(&'a Term, &'a Term)>,
) -> bool {
    match p {
        Term::Var(v) => match subst.get(v) {
            Some(bound) => bound == f,
            None => {
                subst.bind(v.clone(), f.clone());
                true
            }
        },
        Term::Int(_) | Term::Real(_) => p == f,
        Term::App(..) if p.is_interpreted_app() => {
            deferred.push((p, f));
            true
        }
        Term::Range(..) => {
            deferred.push((p, f));
            true
        }
        Term::App(name, args) => match f {
            Term::App(fname, fargs) => {
                name == fname
                    && args.len() == fargs.len()
                    && args.iter().zip(fargs).all(|(a, b)| match_term(a, b, subst, deferred))
            }
            _ => false,
        },
        Term::List(items) => match f {
            Term::List(fitems) => {
                items.len() == fitems.len() && items.iter().zip(fitems).all(|(a, b)| match_term(a, b, subst, deferred))
            }
            _ => false,
        },
    }
}
