//! Text syntax for operator statements.
//!
//! ```text
//! var a, p, q : U -> V
//! var b : V -> U
//! forall a, p, q
//! exists b
//! p*a_adj*a = a & a*a_adj*q = a -> a*b*a = a
//! ```
//!
//! Connectives by increasing strength: `->` (right associative), `|`, `&`,
//! `~`. Atoms are `s = t` or `s != t`; terms use `+`, `-`, `*`, `^`,
//! parentheses, integer scalars and `0`. Quantifiers may also appear inline
//! as `forall x, y: φ`. Without `var` lines every symbol gets the sort
//! `* -> *`.

use crate::freealg::{AdjointMap, Algebra};

use super::formula::{Formula, OperatorStatement};
use super::term::{OpTerm, Sort, SortContext};
use super::LogicError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Int(i64),
    Sym(&'static str),
}

const SYMBOLS: [&str; 14] = ["->", "!=", "=", "&", "|", "~", "(", ")", "+", "-", "*", "^", ",", ":"];

fn tokenize(src: &str) -> Result<Vec<(Tok, usize)>, LogicError> {
    let mut out = Vec::new();
    let bytes = src.as_bytes();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push((Tok::Ident(src[start..i].to_string()), start));
        } else if c.is_ascii_digit() {
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let n = src[start..i]
                .parse()
                .map_err(|_| parse_err(start, "integer too large"))?;
            out.push((Tok::Int(n), start));
        } else if let Some(s) = SYMBOLS.iter().find(|s| src[i..].starts_with(**s)) {
            out.push((Tok::Sym(s), i));
            i += s.len();
        } else {
            return Err(parse_err(i, &format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

fn parse_err(offset: usize, msg: &str) -> LogicError {
    LogicError::Parse {
        offset,
        message: msg.to_string(),
    }
}

#[derive(Clone, Debug)]
enum Raw {
    Var(String, usize),
    Int(i64),
    Add(Box<Raw>, Box<Raw>),
    Sub(Box<Raw>, Box<Raw>),
    Mul(Box<Raw>, Box<Raw>),
    Neg(Box<Raw>),
    Pow(Box<Raw>, u32),
}

/// A term, or an integer not yet attached to an operator.
enum Elab {
    Term(OpTerm),
    Scalar(i64),
}

fn elaborate(raw: &Raw, ctx: &SortContext) -> Result<Elab, LogicError> {
    let overflow = || parse_err(0, "integer overflow");
    Ok(match raw {
        Raw::Var(n, pos) => Elab::Term(OpTerm::var(ctx, n).map_err(|e| match e {
            LogicError::MissingSort(n) => parse_err(*pos, &format!("no sort declared for `{n}`")),
            e => e,
        })?),
        Raw::Int(k) => Elab::Scalar(*k),
        Raw::Neg(a) => match elaborate(a, ctx)? {
            Elab::Scalar(k) => Elab::Scalar(k.checked_neg().ok_or_else(overflow)?),
            Elab::Term(t) => Elab::Term(-t),
        },
        Raw::Mul(a, b) => match (elaborate(a, ctx)?, elaborate(b, ctx)?) {
            (Elab::Scalar(x), Elab::Scalar(y)) => Elab::Scalar(x.checked_mul(y).ok_or_else(overflow)?),
            (Elab::Scalar(k), Elab::Term(t)) | (Elab::Term(t), Elab::Scalar(k)) => Elab::Term(scale(k, t)),
            (Elab::Term(s), Elab::Term(t)) => Elab::Term(OpTerm::product(s, t)?),
        },
        Raw::Add(a, b) | Raw::Sub(a, b) => {
            let neg = matches!(raw, Raw::Sub(..));
            let rhs = match elaborate(b, ctx)? {
                Elab::Scalar(k) if neg => Elab::Scalar(-k),
                Elab::Term(t) if neg => Elab::Term(-t),
                e => e,
            };
            match (elaborate(a, ctx)?, rhs) {
                (Elab::Scalar(x), Elab::Scalar(y)) => Elab::Scalar(x.checked_add(y).ok_or_else(overflow)?),
                (Elab::Scalar(0), Elab::Term(t)) | (Elab::Term(t), Elab::Scalar(0)) => Elab::Term(t),
                (Elab::Scalar(k), Elab::Term(_)) | (Elab::Term(_), Elab::Scalar(k)) => {
                    return Err(LogicError::BareScalar(k))
                }
                (Elab::Term(s), Elab::Term(t)) => Elab::Term(OpTerm::sum(s, t)?),
            }
        }
        Raw::Pow(a, n) => match elaborate(a, ctx)? {
            Elab::Scalar(k) => Elab::Scalar(k.checked_pow(*n).ok_or_else(overflow)?),
            Elab::Term(t) => {
                let mut acc = t.clone();
                for _ in 1..*n {
                    acc = OpTerm::product(acc, t.clone())?;
                }
                Elab::Term(acc)
            }
        },
    })
}

fn scale(k: i64, t: OpTerm) -> OpTerm {
    match k {
        0 => OpTerm::zero(t.sort().clone()),
        1 => t,
        k => OpTerm::scaled(k, t),
    }
}

struct Parser<'a> {
    toks: &'a [(Tok, usize)],
    pos: usize,
    ctx: &'a SortContext,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end, |(_, o)| *o)
    }

    fn eat(&mut self, sym: &str) -> bool {
        if matches!(self.peek(), Some(Tok::Sym(s)) if *s == sym) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, sym: &str) -> Result<(), LogicError> {
        if self.eat(sym) {
            Ok(())
        } else {
            Err(parse_err(self.offset(), &format!("expected `{sym}`")))
        }
    }

    fn ident(&mut self) -> Result<String, LogicError> {
        match self.peek() {
            Some(Tok::Ident(s)) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => Err(parse_err(self.offset(), "expected a name")),
        }
    }

    fn formula(&mut self) -> Result<Formula, LogicError> {
        let lhs = self.disjunction()?;
        if self.eat("->") {
            Ok(Formula::implies(lhs, self.formula()?))
        } else {
            Ok(lhs)
        }
    }

    fn disjunction(&mut self) -> Result<Formula, LogicError> {
        let mut parts = vec![self.conjunction()?];
        while self.eat("|") {
            parts.push(self.conjunction()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::Or(parts) })
    }

    fn conjunction(&mut self) -> Result<Formula, LogicError> {
        let mut parts = vec![self.unary()?];
        while self.eat("&") {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::And(parts) })
    }

    fn unary(&mut self) -> Result<Formula, LogicError> {
        if self.eat("~") {
            return Ok(!self.unary()?);
        }
        if let Some(Tok::Ident(kw)) = self.peek() {
            if kw == "forall" || kw == "exists" {
                let universal = kw == "forall";
                self.pos += 1;
                let mut vars = vec![self.ident()?];
                while self.eat(",") {
                    vars.push(self.ident()?);
                }
                self.expect(":")?;
                let body = self.formula()?;
                return Ok(if universal {
                    Formula::forall(vars, body)
                } else {
                    Formula::exists(vars, body)
                });
            }
        }
        if matches!(self.peek(), Some(Tok::Sym("("))) {
            let save = self.pos;
            if let Ok(atom) = self.atom() {
                return Ok(atom);
            }
            self.pos = save + 1;
            let f = self.formula()?;
            self.expect(")")?;
            return Ok(f);
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<Formula, LogicError> {
        let lhs = self.term()?;
        let positive = if self.eat("=") {
            true
        } else if self.eat("!=") {
            false
        } else {
            return Err(parse_err(self.offset(), "expected `=` or `!=`"));
        };
        let rhs = self.term()?;
        let (s, t) = self.equation_sides(&lhs, &rhs)?;
        let eq = Formula::eq(s, t)?;
        Ok(if positive { eq } else { !eq })
    }

    fn equation_sides(&self, lhs: &Raw, rhs: &Raw) -> Result<(OpTerm, OpTerm), LogicError> {
        let zero_or = |k: i64, sort: Option<&Sort>| -> Result<OpTerm, LogicError> {
            if k != 0 {
                return Err(LogicError::BareScalar(k));
            }
            sort.map(|s| OpTerm::zero(s.clone())).ok_or(LogicError::UnresolvedZero)
        };
        Ok(match (elaborate(lhs, self.ctx)?, elaborate(rhs, self.ctx)?) {
            (Elab::Term(s), Elab::Term(t)) => (s, t),
            (Elab::Term(s), Elab::Scalar(k)) => {
                let t = zero_or(k, Some(s.sort()))?;
                (s, t)
            }
            (Elab::Scalar(k), Elab::Term(t)) => (zero_or(k, Some(t.sort()))?, t),
            (Elab::Scalar(k), Elab::Scalar(l)) => (zero_or(k, self.ctx.fallback())?, zero_or(l, self.ctx.fallback())?),
        })
    }

    fn term(&mut self) -> Result<Raw, LogicError> {
        let mut acc = if self.eat("-") {
            Raw::Neg(Box::new(self.product()?))
        } else {
            self.product()?
        };
        loop {
            if self.eat("+") {
                acc = Raw::Add(Box::new(acc), Box::new(self.product()?));
            } else if self.eat("-") {
                acc = Raw::Sub(Box::new(acc), Box::new(self.product()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn product(&mut self) -> Result<Raw, LogicError> {
        let mut acc = self.power()?;
        while self.eat("*") {
            acc = Raw::Mul(Box::new(acc), Box::new(self.power()?));
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<Raw, LogicError> {
        let base = self.factor()?;
        if self.eat("^") {
            match self.peek() {
                Some(Tok::Int(n)) if *n >= 1 && *n <= u32::MAX as i64 => {
                    let n = *n as u32;
                    self.pos += 1;
                    return Ok(Raw::Pow(Box::new(base), n));
                }
                _ => return Err(parse_err(self.offset(), "expected a positive exponent")),
            }
        }
        Ok(base)
    }

    fn factor(&mut self) -> Result<Raw, LogicError> {
        let offset = self.offset();
        match self.peek().cloned() {
            Some(Tok::Ident(n)) if n != "forall" && n != "exists" => {
                self.pos += 1;
                Ok(Raw::Var(n, offset))
            }
            Some(Tok::Int(k)) => {
                self.pos += 1;
                Ok(Raw::Int(k))
            }
            Some(Tok::Sym("(")) => {
                self.pos += 1;
                let t = self.term()?;
                self.expect(")")?;
                Ok(t)
            }
            Some(Tok::Sym("-")) => {
                self.pos += 1;
                Ok(Raw::Neg(Box::new(self.power()?)))
            }
            _ => Err(parse_err(offset, "expected a term")),
        }
    }
}

fn names(list: &str, offset: usize) -> Result<Vec<String>, LogicError> {
    list.split(',')
        .map(|s| {
            let s = s.trim();
            let ok = !s.is_empty()
                && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
                && !s.starts_with(|c: char| c.is_ascii_digit());
            if ok {
                Ok(s.to_string())
            } else {
                Err(parse_err(offset, &format!("invalid name `{s}`")))
            }
        })
        .collect()
}

/// Parses a statement. `adjoints` pairs variables with their adjoints so
/// that partners get the swapped sort and follow their quantified variable.
pub fn parse_statement(
    src: &str,
    algebra: &Algebra,
    adjoints: Option<&AdjointMap>,
) -> Result<OperatorStatement, LogicError> {
    let mut decls: Vec<(Vec<String>, Sort)> = Vec::new();
    let mut forall: Vec<String> = Vec::new();
    let mut exists: Vec<String> = Vec::new();
    let mut body = String::new();
    let mut offset = 0;
    for line in src.lines() {
        let start = offset;
        offset += line.len() + 1;
        let text = line.split('#').next().unwrap_or("").trim();
        let head = |kw: &str| text.strip_prefix(kw).filter(|r| r.starts_with(char::is_whitespace));
        if let Some(rest) = head("var") {
            let (vars, sort) = rest
                .split_once(':')
                .ok_or_else(|| parse_err(start, "expected `var names : U -> V`"))?;
            let (dom, cod) = sort
                .split_once("->")
                .ok_or_else(|| parse_err(start, "expected a sort `U -> V`"))?;
            let dom = names(dom, start)?;
            let cod = names(cod, start)?;
            if dom.len() != 1 || cod.len() != 1 {
                return Err(parse_err(start, "a sort names one domain and one codomain"));
            }
            decls.push((names(vars, start)?, Sort::new(dom[0].clone(), cod[0].clone())));
        } else if let Some(rest) = head("forall").filter(|r| !r.contains(':')) {
            forall.extend(names(rest, start)?);
        } else if let Some(rest) = head("exists").filter(|r| !r.contains(':')) {
            exists.extend(names(rest, start)?);
        } else {
            body.push_str(line.split('#').next().unwrap_or(""));
            body.push('\n');
        }
    }
    let mut ctx = if decls.is_empty() {
        SortContext::uniform(Sort::loop_at("*"))
    } else {
        SortContext::new()
    };
    for (vars, sort) in decls {
        for v in vars {
            algebra.var(&v)?;
            ctx.declare(&v, sort.clone())?;
        }
    }
    if let Some(adj) = adjoints {
        ctx = ctx.with_adjoints(algebra, adj)?;
    }
    let toks = tokenize(&body)?;
    if toks.is_empty() {
        return Err(parse_err(0, "empty statement"));
    }
    let mut p = Parser {
        toks: &toks,
        pos: 0,
        ctx: &ctx,
        end: body.len(),
    };
    let matrix = p.formula()?;
    if p.pos < toks.len() {
        return Err(parse_err(p.offset(), "unexpected trailing input"));
    }
    check_names(&matrix, algebra)?;
    for v in forall.iter().chain(&exists) {
        algebra.var(v)?;
    }
    let formula = Formula::forall(forall, Formula::exists(exists, matrix));
    Ok(OperatorStatement::new(formula, ctx))
}

fn check_names(f: &Formula, algebra: &Algebra) -> Result<(), LogicError> {
    match f {
        Formula::Eq(s, t) => {
            let mut vs = std::collections::BTreeSet::new();
            s.collect_vars(&mut vs);
            t.collect_vars(&mut vs);
            for v in vs {
                algebra.var(&v)?;
            }
            Ok(())
        }
        Formula::Not(a) => check_names(a, algebra),
        Formula::And(v) | Formula::Or(v) => v.iter().try_for_each(|x| check_names(x, algebra)),
        Formula::Implies(a, b) => {
            check_names(a, algebra)?;
            check_names(b, algebra)
        }
        Formula::Forall(vs, b) | Formula::Exists(vs, b) => {
            for v in vs {
                algebra.var(v)?;
            }
            check_names(b, algebra)
        }
    }
}
