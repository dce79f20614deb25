//! Surface syntax: programs, `config(key, value)` directives and conditional queries.
//!
//! Operators, from loosest to tightest: `:-`, `|`, `,`, `\+` (prefix), `::`, `@`,
//! `= ~ \= < <= =< > >=`, `+ - ++ --`, `* /`, prefix `-`. Sum heads are split at a
//! top-level `+` whose right-hand alternative carries its own `::`.

mod lexer;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::logic::{Atom, Body, Cmp, Head, Literal, Rule, Term};
use lexer::{Tok, Token};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ParseError {
    #[error("{line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("rule `{rule}` is not range-restricted: variable {var} does not occur in a positive ordinary body atom")]
    RangeRestriction { rule: String, var: String },
}

impl ParseError {
    pub(crate) fn at(line: usize, col: usize, msg: impl Into<String>) -> ParseError {
        ParseError::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }
}

/// A conditional query `?- B | E.`; the evidence is a list of ground atoms.
#[derive(Clone, Debug, PartialEq)]
pub struct InputQuery {
    pub body: Body,
    pub evidence: Vec<Atom>,
}

impl fmt::Display for InputQuery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?- {}", self.body)?;
        if !self.evidence.is_empty() {
            f.write_str(" | ")?;
            for (i, e) in self.evidence.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{e}")?;
            }
        }
        f.write_str(".")
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct SourceProgram {
    pub rules: Vec<Rule>,
    /// Directives in source order; later settings of a key win.
    pub configs: Vec<(String, Term)>,
    pub queries: Vec<InputQuery>,
}

impl SourceProgram {
    pub fn config(&self, key: &str) -> Option<&Term> {
        self.configs.iter().rev().find(|(k, _)| k == key).map(|(_, v)| v)
    }
}

impl fmt::Display for SourceProgram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, v) in &self.configs {
            writeln!(f, "config({k}, {v}).")?;
        }
        for r in &self.rules {
            writeln!(f, "{r}")?;
        }
        for q in &self.queries {
            writeln!(f, "{q}")?;
        }
        Ok(())
    }
}

pub fn parse_program(text: &str) -> Result<SourceProgram, ParseError> {
    let tokens = lexer::tokenize(text)?;
    let mut program = SourceProgram::default();
    let mut fresh = 0usize;
    let mut start = 0;
    while start < tokens.len() {
        let end = tokens[start..]
            .iter()
            .position(|t| t.is("."))
            .map(|p| start + p)
            .ok_or_else(|| {
                let t = &tokens[start];
                ParseError::at(t.line, t.col, "clause is not terminated by '.'")
            })?;
        let clause = &tokens[start..end];
        if clause.is_empty() {
            let t = &tokens[end];
            return Err(ParseError::at(t.line, t.col, "empty clause"));
        }
        let end_tok = &tokens[end];
        let mut cx = Clause {
            fresh: &mut fresh,
            end: (end_tok.line, end_tok.col),
        };
        if clause[0].is("?-") {
            program.queries.push(cx.query(&clause[1..], &clause[0])?);
        } else if let Some((key, value)) = cx.directive(clause)? {
            program.configs.push((key, value));
        } else {
            program.rules.push(cx.rule(clause)?);
        }
        start = end + 1;
    }
    Ok(program)
}

/// Parse a single query; the leading `?-` and the trailing `.` are optional.
pub fn parse_query(text: &str) -> Result<InputQuery, ParseError> {
    let tokens = lexer::tokenize(text)?;
    let mut slice = &tokens[..];
    let (line, col) = slice.last().map(|t| (t.line, t.col)).unwrap_or((1, 1));
    if slice.last().is_some_and(|t| t.is(".")) {
        slice = &slice[..slice.len() - 1];
    }
    if slice.iter().any(|t| t.is(".")) {
        return Err(ParseError::at(line, col, "expected a single query"));
    }
    let mut fresh = 0;
    let mut cx = Clause {
        fresh: &mut fresh,
        end: (line, col),
    };
    match slice.first() {
        Some(t) if t.is("?-") => {
            let t = t.clone();
            cx.query(&slice[1..], &t)
        }
        Some(t) => {
            let t = t.clone();
            cx.query(slice, &t)
        }
        None => Err(ParseError::at(line, col, "empty query")),
    }
}

#[derive(Clone, Debug)]
enum Expr {
    Var(String),
    Int(i64),
    Float(f64),
    Compound(String, Vec<Expr>),
    List(Vec<Expr>),
    Range(Box<Expr>, Box<Expr>),
    Bin(&'static str, Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Not(Box<Expr>),
}

fn infix_bp(op: &str) -> Option<(u8, u8)> {
    Some(match op {
        "," => (20, 20),
        "::" => (30, 31),
        "@" => (35, 36),
        "=" | "~" | "\\=" | "<" | "<=" | "=<" | ">" | ">=" => (40, 41),
        "+" | "-" | "++" | "--" => (50, 51),
        "*" | "/" => (60, 61),
        _ => return None,
    })
}

const NOT_OPERAND_BP: u8 = 21;
const NEG_OPERAND_BP: u8 = 70;
const ARG_BP: u8 = 21;

struct Pratt<'a> {
    toks: &'a [Token],
    pos: usize,
    end: (usize, usize),
}

impl<'a> Pratt<'a> {
    fn err_here(&self, msg: impl Into<String>) -> ParseError {
        let (l, c) = self.toks.get(self.pos).map(|t| (t.line, t.col)).unwrap_or(self.end);
        ParseError::at(l, c, msg)
    }

    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, p: &str) -> bool {
        if self.peek().is_some_and(|t| t.is(p)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, p: &str) -> Result<(), ParseError> {
        if self.eat(p) {
            Ok(())
        } else {
            Err(self.err_here(format!("expected '{p}'")))
        }
    }

    fn finish(&self) -> Result<(), ParseError> {
        match self.peek() {
            None => Ok(()),
            Some(t) => Err(ParseError::at(
                t.line,
                t.col,
                format!("unexpected {}", describe(&t.tok)),
            )),
        }
    }

    fn expr(&mut self, min_bp: u8) -> Result<Expr, ParseError> {
        let mut lhs = self.primary()?;
        loop {
            let op = match self.peek() {
                Some(Token { tok: Tok::Punct(p), .. }) => *p,
                _ => break,
            };
            let Some((lbp, rbp)) = infix_bp(op) else { break };
            if lbp < min_bp {
                break;
            }
            self.pos += 1;
            let rhs = self.expr(rbp)?;
            lhs = Expr::Bin(op, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> Result<Expr, ParseError> {
        let Some(t) = self.peek() else {
            return Err(self.err_here("unexpected end of clause"));
        };
        self.pos += 1;
        match &t.tok {
            Tok::Var(v) => Ok(Expr::Var(v.clone())),
            Tok::Int(i) => Ok(Expr::Int(*i)),
            Tok::Float(x) => Ok(Expr::Float(*x)),
            Tok::Name(n) => {
                let mut args = Vec::new();
                // Arguments must follow the name immediately.
                if let Some(next) = self.peek() {
                    if next.is("(") && next.line == t.line && next.col == t.col + name_width(&t.tok) {
                        self.pos += 1;
                        loop {
                            args.push(self.expr(ARG_BP)?);
                            if !self.eat(",") {
                                break;
                            }
                        }
                        self.expect(")")?;
                    }
                }
                Ok(Expr::Compound(n.clone(), args))
            }
            Tok::Punct("(") => {
                let e = self.expr(0)?;
                self.expect(")")?;
                Ok(e)
            }
            Tok::Punct("[") => {
                if self.eat("]") {
                    return Ok(Expr::List(Vec::new()));
                }
                let first = self.expr(ARG_BP)?;
                if self.eat("..") {
                    let hi = self.expr(ARG_BP)?;
                    self.expect("]")?;
                    return Ok(Expr::Range(Box::new(first), Box::new(hi)));
                }
                let mut items = vec![first];
                while self.eat(",") {
                    items.push(self.expr(ARG_BP)?);
                }
                self.expect("]")?;
                Ok(Expr::List(items))
            }
            Tok::Punct("-") => Ok(match self.expr(NEG_OPERAND_BP)? {
                Expr::Int(i) => Expr::Int(-i),
                Expr::Float(x) => Expr::Float(-x),
                e => Expr::Neg(Box::new(e)),
            }),
            Tok::Punct("\\+") => Ok(Expr::Not(Box::new(self.expr(NOT_OPERAND_BP)?))),
            other => {
                self.pos -= 1;
                Err(self.err_here(format!("unexpected {}", describe(other))))
            }
        }
    }
}

fn name_width(t: &Tok) -> usize {
    match t {
        Tok::Name(n) if is_bare(n) => n.chars().count(),
        // Quoted: surrounding quotes plus escapes.
        Tok::Name(n) => n.chars().count() + 2 + n.matches('\'').count(),
        _ => 0,
    }
}

fn is_bare(n: &str) -> bool {
    let mut cs = n.chars();
    matches!(cs.next(), Some(c) if c.is_alphabetic() && !c.is_uppercase() || c == '$')
        && cs.all(|c| c.is_alphanumeric() || c == '_')
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Name(n) => format!("name '{n}'"),
        Tok::Var(v) => format!("variable {v}"),
        Tok::Int(i) => format!("number {i}"),
        Tok::Float(x) => format!("number {x}"),
        Tok::Punct(p) => format!("'{p}'"),
    }
}

/// Per-clause conversion state: anonymous variables become fresh named ones.
struct Clause<'f> {
    fresh: &'f mut usize,
    end: (usize, usize),
}

/// Top-level (bracket depth 0) positions of the given punctuation.
fn top_level(toks: &[Token], p: &str) -> Vec<usize> {
    let mut depth = 0i32;
    let mut out = Vec::new();
    for (i, t) in toks.iter().enumerate() {
        if t.is("(") || t.is("[") {
            depth += 1;
        } else if t.is(")") || t.is("]") {
            depth -= 1;
        } else if depth == 0 && t.is(p) {
            out.push(i);
        }
    }
    out
}

impl Clause<'_> {
    fn parse_expr(&self, toks: &[Token]) -> Result<Expr, ParseError> {
        let mut p = Pratt {
            toks,
            pos: 0,
            end: self.end,
        };
        let e = p.expr(0)?;
        p.finish()?;
        Ok(e)
    }

    fn err(&self, toks: &[Token], msg: impl Into<String>) -> ParseError {
        let (l, c) = toks.first().map(|t| (t.line, t.col)).unwrap_or(self.end);
        ParseError::at(l, c, msg)
    }

    fn directive(&mut self, toks: &[Token]) -> Result<Option<(String, Term)>, ParseError> {
        let is_config = matches!(toks.first(), Some(Token { tok: Tok::Name(n), .. }) if n == "config")
            && toks.get(1).is_some_and(|t| t.is("("))
            && top_level(toks, ":-").is_empty()
            && top_level(toks, "@").is_empty();
        if !is_config {
            return Ok(None);
        }
        match self.parse_expr(toks)? {
            Expr::Compound(_, args) if args.len() == 2 => {
                let key = match &args[0] {
                    Expr::Compound(k, a) if a.is_empty() => k.clone(),
                    _ => return Err(self.err(toks, "config key must be a name")),
                };
                let value = self.term(&args[1], toks)?;
                if !value.is_ground() {
                    return Err(self.err(toks, "config value must be ground"));
                }
                Ok(Some((key, value)))
            }
            _ => Ok(None),
        }
    }

    fn rule(&mut self, toks: &[Token]) -> Result<Rule, ParseError> {
        let necks = top_level(toks, ":-");
        let (head_toks, body) = match necks.as_slice() {
            [] => (toks, Body::default()),
            [i] => {
                if *i + 1 >= toks.len() {
                    return Err(self.err(&toks[*i..], "empty rule body"));
                }
                (&toks[..*i], self.body(&toks[*i + 1..])?)
            }
            [_, j, ..] => return Err(self.err(&toks[*j..], "unexpected ':-'")),
        };
        if head_toks.is_empty() {
            return Err(self.err(toks, "missing rule head"));
        }
        let head = self.head(head_toks)?;
        let rule = Rule { head, body };
        if let Some(var) = rule.range_violation() {
            return Err(ParseError::RangeRestriction {
                rule: rule.to_string(),
                var: var.to_string(),
            });
        }
        Ok(rule)
    }

    fn query(&mut self, toks: &[Token], at: &Token) -> Result<InputQuery, ParseError> {
        if toks.is_empty() {
            return Err(ParseError::at(at.line, at.col, "empty query body"));
        }
        let bars = top_level(toks, "|");
        let (body_toks, ev_toks) = match bars.as_slice() {
            [] => (toks, None),
            [i] => (&toks[..*i], Some(&toks[*i + 1..])),
            [_, j, ..] => return Err(self.err(&toks[*j..], "unexpected '|'")),
        };
        if body_toks.is_empty() {
            return Err(ParseError::at(at.line, at.col, "empty query body"));
        }
        let body = self.body(body_toks)?;
        let mut evidence = Vec::new();
        if let Some(ev) = ev_toks {
            if ev.is_empty() {
                return Err(self.err(toks, "empty evidence"));
            }
            let e = self.parse_expr(ev)?;
            for item in flatten_commas(e) {
                let atom = match self.literal(&item, ev)? {
                    Lit::Pos(a) if !a.is_builtin() => a,
                    _ => return Err(self.err(ev, "evidence must consist of ordinary atoms or equations")),
                };
                if !atom.is_ground() {
                    return Err(self.err(ev, format!("evidence atom {atom} is not ground")));
                }
                evidence.push(atom);
            }
        }
        Ok(InputQuery { body, evidence })
    }

    fn body(&mut self, toks: &[Token]) -> Result<Body, ParseError> {
        let e = self.parse_expr(toks)?;
        let mut body = Body::default();
        for item in flatten_commas(e) {
            match self.literal(&item, toks)? {
                Lit::Pos(a) => body.positives.push(a),
                Lit::Neg(atoms) => body.negatives.push(atoms),
            }
        }
        Ok(body)
    }

    fn literal(&mut self, e: &Expr, toks: &[Token]) -> Result<Lit, ParseError> {
        match e {
            Expr::Not(inner) => {
                let mut atoms = Vec::new();
                for item in flatten_commas((**inner).clone()) {
                    match self.literal(&item, toks)? {
                        Lit::Pos(a) => atoms.push(a),
                        Lit::Neg(_) => return Err(self.err(toks, "nested negation is not supported")),
                    }
                }
                Ok(Lit::Neg(atoms))
            }
            Expr::Neg(inner) => {
                let a = self.atom(inner, toks)?;
                if a.is_builtin() {
                    return Err(self.err(toks, "'-' applies to ordinary atoms only"));
                }
                Ok(Lit::Neg(vec![a]))
            }
            // `-a @ t` parses as `(-a) @ t`.
            Expr::Bin("@", lhs, t) if matches!(**lhs, Expr::Neg(_)) => {
                let Expr::Neg(inner) = &**lhs else { unreachable!() };
                let a = self.atom(&Expr::Bin("@", inner.clone(), t.clone()), toks)?;
                Ok(Lit::Neg(vec![a]))
            }
            _ => Ok(Lit::Pos(self.atom(e, toks)?)),
        }
    }

    fn atom(&mut self, e: &Expr, toks: &[Token]) -> Result<Atom, ParseError> {
        let (core, time) = match e {
            Expr::Bin("@", lhs, t) => (&**lhs, Some(self.term(t, toks)?)),
            _ => (e, None),
        };
        let timed = time.is_some();
        let time = time.unwrap_or(Term::Int(0));
        match core {
            Expr::Compound(name, args) => {
                let args = args.iter().map(|a| self.term(a, toks)).collect::<Result<_, _>>()?;
                Ok(Atom::ordinary(name, args, time))
            }
            Expr::Bin(op, l, r) if Cmp::from_symbol(op).is_some() => {
                let cmp = Cmp::from_symbol(op).unwrap();
                let lhs = self.term(l, toks)?;
                let rhs = self.term(r, toks)?;
                if cmp == Cmp::Eq && lhs.is_ordinary_functional() {
                    let Term::App(f, args) = lhs else { unreachable!() };
                    return Ok(Atom::Equation {
                        func: f,
                        args,
                        rhs,
                        time,
                    });
                }
                if timed {
                    return Err(self.err(toks, format!("built-in '{op}' cannot carry a time term")));
                }
                Ok(Atom::builtin(cmp, lhs, rhs))
            }
            _ => Err(self.err(toks, "expected an atom")),
        }
    }

    fn head(&mut self, toks: &[Token]) -> Result<Head, ParseError> {
        let plus = top_level(toks, "+");
        let mut cuts = Vec::new();
        for (k, &i) in plus.iter().enumerate() {
            let seg_end = plus.get(k + 1).copied().unwrap_or(toks.len());
            if !top_level(&toks[i + 1..seg_end], "::").is_empty() {
                cuts.push(i);
            }
        }
        if cuts.is_empty() {
            let e = self.parse_expr(toks)?;
            return self.single_head(&e, toks);
        }
        let mut items = Vec::new();
        let mut from = 0;
        for &c in cuts.iter().chain(std::iter::once(&toks.len())) {
            let seg = &toks[from..c];
            let e = self.parse_expr(seg)?;
            match e {
                Expr::Bin("::", p, a) => {
                    let prob = self.term(&p, seg)?;
                    let atom = self.atom(&a, seg)?;
                    if atom.is_builtin() {
                        return Err(self.err(seg, "head alternatives must be ordinary atoms"));
                    }
                    items.push((prob, atom));
                }
                _ => return Err(self.err(seg, "every alternative of a sum head needs a probability")),
            }
            from = c + 1;
        }
        let t0 = items[0].1.time().cloned();
        if items.iter().any(|(_, a)| a.time().cloned() != t0) {
            return Err(self.err(toks, "alternatives of a sum head must share one time term"));
        }
        Ok(Head::Sum(items))
    }

    fn single_head(&mut self, e: &Expr, toks: &[Token]) -> Result<Head, ParseError> {
        let (core, time) = match e {
            Expr::Bin("@", lhs, t) if matches!(**lhs, Expr::Bin("~", ..)) => (&**lhs, Some(&**t)),
            _ => (e, None),
        };
        if let Expr::Bin("~", f, support) = core {
            let Term::App(func, args) = self.term(f, toks)? else {
                return Err(self.err(toks, "left-hand side of '~' must be an ordinary functional term"));
            };
            if crate::logic::is_interpreted(&func, args.len()) {
                return Err(self.err(toks, "left-hand side of '~' must be an ordinary functional term"));
            }
            let support = self.term(support, toks)?;
            let time = match time {
                Some(t) => self.term(t, toks)?,
                None => Term::Int(0),
            };
            return Ok(Head::Distribution {
                func,
                args,
                support,
                time,
            });
        }
        let (prob, atom_e) = match e {
            Expr::Bin("::", p, a) => (self.term(p, toks)?, &**a),
            _ => (Term::real(1.0), e),
        };
        let atom = self.atom(atom_e, toks)?;
        if atom.is_builtin() {
            return Err(self.err(toks, "rule head must be an ordinary atom or an equation"));
        }
        Ok(Head::Ordinary { prob, atom })
    }

    fn term(&mut self, e: &Expr, toks: &[Token]) -> Result<Term, ParseError> {
        Ok(match e {
            Expr::Var(v) if v == "_" => {
                *self.fresh += 1;
                Term::var(&format!("_G{}", self.fresh))
            }
            Expr::Var(v) => Term::var(v),
            Expr::Int(i) => Term::Int(*i),
            Expr::Float(x) => Term::real(*x),
            Expr::Compound(n, args) => Term::app(n, args.iter().map(|a| self.term(a, toks)).collect::<Result<_, _>>()?),
            Expr::List(items) => Term::List(items.iter().map(|a| self.term(a, toks)).collect::<Result<_, _>>()?),
            Expr::Range(lo, hi) => Term::Range(Box::new(self.term(lo, toks)?), Box::new(self.term(hi, toks)?)),
            Expr::Bin(op, l, r) if crate::logic::is_interpreted(op, 2) => {
                Term::binary(op, self.term(l, toks)?, self.term(r, toks)?)
            }
            Expr::Neg(inner) => Term::app("-", vec![self.term(inner, toks)?]),
            Expr::Bin(op, ..) => return Err(self.err(toks, format!("operator '{op}' is not allowed inside a term"))),
            Expr::Not(_) => return Err(self.err(toks, "'\\+' is not allowed inside a term")),
        })
    }
}

enum Lit {
    Pos(Atom),
    Neg(Vec<Atom>),
}

fn flatten_commas(e: Expr) -> Vec<Expr> {
    let mut out = Vec::new();
    let mut cur = e;
    loop {
        match cur {
            Expr::Bin(",", l, r) => {
                out.extend(flatten_commas(*l));
                cur = *r;
            }
            other => {
                out.push(other);
                return out;
            }
        }
    }
}

/// Variables of the query body that name answers, in order of first occurrence.
/// Generated names for anonymous variables are excluded.
pub fn answer_variables(body: &Body) -> Vec<crate::logic::Sym> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for a in body.positives.iter().filter(|a| !a.is_builtin()) {
        let mut vs = Vec::new();
        ordered_vars_atom(a, &mut vs);
        for v in vs {
            if !v.starts_with("_G") && seen.insert(v.clone()) {
                out.push(v);
            }
        }
    }
    out
}

fn ordered_vars_atom(a: &Atom, out: &mut Vec<crate::logic::Sym>) {
    match a {
        Atom::Ordinary { args, time, .. } => {
            args.iter().for_each(|t| ordered_vars(t, out));
            ordered_vars(time, out);
        }
        Atom::Equation { args, rhs, time, .. } => {
            args.iter().for_each(|t| ordered_vars(t, out));
            ordered_vars(rhs, out);
            ordered_vars(time, out);
        }
        Atom::Builtin { lhs, rhs, .. } => {
            ordered_vars(lhs, out);
            ordered_vars(rhs, out);
        }
    }
}

fn ordered_vars(t: &Term, out: &mut Vec<crate::logic::Sym>) {
    match t {
        Term::Var(v) => out.push(v.clone()),
        Term::Int(_) | Term::Real(_) => {}
        Term::App(_, args) | Term::List(args) => args.iter().for_each(|a| ordered_vars(a, out)),
        Term::Range(lo, hi) => {
            ordered_vars(lo, out);
            ordered_vars(hi, out);
        }
    }
}

/// The ground literals of a query body: ground positive ordinary atoms, and the atoms of
/// single-atom ground negative elements, negated.
pub fn ground_literals(body: &Body) -> Vec<Literal> {
    let mut out: Vec<Literal> = body
        .positives
        .iter()
        .filter(|a| a.is_ground() && !a.is_builtin())
        .cloned()
        .map(Literal::pos)
        .collect();
    for element in &body.negatives {
        if let [a] = element.as_slice() {
            if a.is_ground() && !a.is_builtin() {
                out.push(Literal::neg(a.clone()));
            }
        }
    }
    out
}
