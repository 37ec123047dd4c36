use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::freealg::{AdjointMap, Algebra, Polynomial, Rational};
use crate::quiver::Quiver;

use super::LogicError;

/// Domain and codomain objects of an operator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sort {
    pub domain: String,
    pub codomain: String,
}

impl Sort {
    pub fn new(domain: impl Into<String>, codomain: impl Into<String>) -> Self {
        Sort {
            domain: domain.into(),
            codomain: codomain.into(),
        }
    }

    /// The single-object sort used when nothing is declared.
    pub fn loop_at(object: impl Into<String>) -> Self {
        let o = object.into();
        Sort::new(o.clone(), o)
    }

    pub fn swapped(&self) -> Sort {
        Sort::new(self.codomain.clone(), self.domain.clone())
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} -> {}", self.domain, self.codomain)
    }
}

/// Sort assignment for symbols, with optional adjoint pairing.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SortContext {
    sorts: BTreeMap<String, Sort>,
    partners: BTreeMap<String, String>,
    fallback: Option<Sort>,
}

impl SortContext {
    pub fn new() -> Self {
        Self::default()
    }

    /// Every symbol not declared explicitly gets `sort`.
    pub fn uniform(sort: Sort) -> Self {
        SortContext {
            fallback: Some(sort),
            ..Self::default()
        }
    }

    /// Sorts read off a quiver: the edge labelled `x` from `U` to `V` gives
    /// `x : U -> V`. Labels on several edges are rejected.
    pub fn from_quiver(quiver: &Quiver, algebra: &Algebra) -> Result<Self, LogicError> {
        let mut ctx = Self::new();
        for e in quiver.edges() {
            ctx.declare(algebra.name(e.label), Sort::new(e.source.clone(), e.target.clone()))?;
        }
        Ok(ctx)
    }

    pub fn declare(&mut self, name: &str, sort: Sort) -> Result<(), LogicError> {
        match self.sorts.get(name) {
            Some(s) if *s != sort => Err(LogicError::ConflictingSort {
                name: name.to_string(),
                first: s.clone(),
                second: sort,
            }),
            _ => {
                self.sorts.insert(name.to_string(), sort);
                Ok(())
            }
        }
    }

    pub fn sort_of(&self, name: &str) -> Option<Sort> {
        self.sorts.get(name).cloned().or_else(|| self.fallback.clone())
    }

    pub fn is_declared(&self, name: &str) -> bool {
        self.sorts.contains_key(name)
    }

    pub fn fallback(&self) -> Option<&Sort> {
        self.fallback.as_ref()
    }

    /// Records the adjoint pairing and gives each partner the swapped sort.
    pub fn with_adjoints(mut self, algebra: &Algebra, adj: &AdjointMap) -> Result<Self, LogicError> {
        for v in algebra.vars() {
            if let Some(w) = adj.partner(v) {
                let (n, m) = (algebra.name(v), algebra.name(w));
                self.partners.insert(n.to_string(), m.to_string());
                if let Some(s) = self.sorts.get(n).cloned() {
                    self.declare(m, s.swapped())?;
                }
            }
        }
        Ok(self)
    }

    pub fn partner(&self, name: &str) -> Option<&str> {
        self.partners.get(name).map(String::as_str)
    }

    /// The recorded pairing as an [`AdjointMap`], if there is one.
    pub fn adjoint_map(&self, algebra: &Algebra) -> Result<Option<AdjointMap>, LogicError> {
        if self.partners.is_empty() {
            return Ok(None);
        }
        let pairs = self
            .partners
            .iter()
            .map(|(a, b)| Ok((algebra.var(a)?, algebra.var(b)?)))
            .collect::<Result<Vec<_>, LogicError>>()?;
        Ok(Some(AdjointMap::from_pairs(algebra, &pairs)?))
    }

    pub fn declared(&self) -> impl Iterator<Item = (&str, &Sort)> {
        self.sorts.iter().map(|(n, s)| (n.as_str(), s))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermKind {
    Var(String),
    Zero,
    Sum(Box<OpTerm>, Box<OpTerm>),
    /// `Product(s, t)` is `s t`: apply `t` first.
    Product(Box<OpTerm>, Box<OpTerm>),
    Scaled(i64, Box<OpTerm>),
}

/// A well-sorted operator term. The constructors reject ill-sorted trees.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OpTerm {
    kind: TermKind,
    sort: Sort,
}

impl OpTerm {
    pub fn var(ctx: &SortContext, name: &str) -> Result<Self, LogicError> {
        let sort = ctx
            .sort_of(name)
            .ok_or_else(|| LogicError::MissingSort(name.to_string()))?;
        Ok(OpTerm {
            kind: TermKind::Var(name.to_string()),
            sort,
        })
    }

    pub fn zero(sort: Sort) -> Self {
        OpTerm {
            kind: TermKind::Zero,
            sort,
        }
    }

    pub fn sum(s: OpTerm, t: OpTerm) -> Result<Self, LogicError> {
        if s.sort != t.sort {
            return Err(LogicError::SortMismatch {
                op: "sum",
                left: s.sort,
                right: t.sort,
            });
        }
        let sort = s.sort.clone();
        Ok(OpTerm {
            kind: TermKind::Sum(Box::new(s), Box::new(t)),
            sort,
        })
    }

    pub fn product(s: OpTerm, t: OpTerm) -> Result<Self, LogicError> {
        if s.sort.domain != t.sort.codomain {
            return Err(LogicError::SortMismatch {
                op: "product",
                left: s.sort,
                right: t.sort,
            });
        }
        let sort = Sort::new(t.sort.domain.clone(), s.sort.codomain.clone());
        Ok(OpTerm {
            kind: TermKind::Product(Box::new(s), Box::new(t)),
            sort,
        })
    }

    pub fn scaled(k: i64, t: OpTerm) -> Self {
        let sort = t.sort.clone();
        OpTerm {
            kind: TermKind::Scaled(k, Box::new(t)),
            sort,
        }
    }

    /// Product of a nonempty chain of variable names, left to right.
    pub fn word(ctx: &SortContext, names: &[&str]) -> Result<Self, LogicError> {
        let mut it = names.iter();
        let first = it.next().ok_or(LogicError::EmptyWord)?;
        let mut t = OpTerm::var(ctx, first)?;
        for n in it {
            t = OpTerm::product(t, OpTerm::var(ctx, n)?)?;
        }
        Ok(t)
    }

    pub fn sort(&self) -> &Sort {
        &self.sort
    }

    pub fn kind(&self) -> &TermKind {
        &self.kind
    }

    pub fn is_zero_constant(&self) -> bool {
        matches!(self.kind, TermKind::Zero)
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match &self.kind {
            TermKind::Var(n) => {
                out.insert(n.clone());
            }
            TermKind::Zero => {}
            TermKind::Sum(a, b) | TermKind::Product(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
            TermKind::Scaled(_, a) => a.collect_vars(out),
        }
    }

    /// Recomputes the sort bottom-up against `ctx`.
    pub fn check(&self, ctx: &SortContext) -> Result<Sort, LogicError> {
        let s = match &self.kind {
            TermKind::Var(n) => ctx
                .sort_of(n)
                .ok_or_else(|| LogicError::MissingSort(n.clone()))?,
            TermKind::Zero => self.sort.clone(),
            TermKind::Sum(a, b) => {
                let (x, y) = (a.check(ctx)?, b.check(ctx)?);
                if x != y {
                    return Err(LogicError::SortMismatch { op: "sum", left: x, right: y });
                }
                x
            }
            TermKind::Product(a, b) => {
                let (x, y) = (a.check(ctx)?, b.check(ctx)?);
                if x.domain != y.codomain {
                    return Err(LogicError::SortMismatch { op: "product", left: x, right: y });
                }
                Sort::new(y.domain, x.codomain)
            }
            TermKind::Scaled(_, a) => a.check(ctx)?,
        };
        if s != self.sort {
            return Err(LogicError::SortMismatch {
                op: "annotation",
                left: self.sort.clone(),
                right: s,
            });
        }
        Ok(s)
    }

    /// Replaces variables by terms of the same sort.
    pub fn substitute(&self, map: &BTreeMap<String, OpTerm>) -> Result<OpTerm, LogicError> {
        Ok(match &self.kind {
            TermKind::Var(n) => match map.get(n) {
                Some(t) if t.sort != self.sort => {
                    return Err(LogicError::SortMismatch {
                        op: "substitution",
                        left: self.sort.clone(),
                        right: t.sort.clone(),
                    })
                }
                Some(t) => t.clone(),
                None => self.clone(),
            },
            TermKind::Zero => self.clone(),
            TermKind::Sum(a, b) => OpTerm::sum(a.substitute(map)?, b.substitute(map)?)?,
            TermKind::Product(a, b) => OpTerm::product(a.substitute(map)?, b.substitute(map)?)?,
            TermKind::Scaled(k, a) => OpTerm::scaled(*k, a.substitute(map)?),
        })
    }

    /// The adjoint term: products reversed, variables swapped with their
    /// partners, sorts swapped.
    pub fn adjoint(&self, ctx: &SortContext) -> Result<OpTerm, LogicError> {
        Ok(match &self.kind {
            TermKind::Var(n) => {
                let p = ctx
                    .partner(n)
                    .ok_or_else(|| LogicError::NoPartner(n.clone()))?;
                OpTerm {
                    kind: TermKind::Var(p.to_string()),
                    sort: self.sort.swapped(),
                }
            }
            TermKind::Zero => OpTerm::zero(self.sort.swapped()),
            TermKind::Sum(a, b) => OpTerm::sum(a.adjoint(ctx)?, b.adjoint(ctx)?)?,
            TermKind::Product(a, b) => OpTerm::product(b.adjoint(ctx)?, a.adjoint(ctx)?)?,
            TermKind::Scaled(k, a) => OpTerm::scaled(*k, a.adjoint(ctx)?),
        })
    }

    pub fn to_polynomial(&self, algebra: &Algebra) -> Result<Polynomial, LogicError> {
        Ok(match &self.kind {
            TermKind::Var(n) => algebra.gen(n)?,
            TermKind::Zero => Polynomial::zero(),
            TermKind::Sum(a, b) => a.to_polynomial(algebra)? + b.to_polynomial(algebra)?,
            TermKind::Product(a, b) => a.to_polynomial(algebra)? * b.to_polynomial(algebra)?,
            TermKind::Scaled(k, a) => a.to_polynomial(algebra)?.scale(&Rational::from_integer((*k).into())),
        })
    }

    fn precedence(&self) -> u8 {
        match &self.kind {
            TermKind::Sum(..) => 0,
            TermKind::Scaled(..) => 1,
            TermKind::Product(..) => 2,
            TermKind::Var(_) | TermKind::Zero => 3,
        }
    }
}

impl std::ops::Neg for OpTerm {
    type Output = OpTerm;

    fn neg(self) -> OpTerm {
        OpTerm::scaled(-1, self)
    }
}

impl fmt::Display for OpTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |f: &mut fmt::Formatter<'_>, t: &OpTerm, min: u8| {
            if t.precedence() < min {
                write!(f, "({t})")
            } else {
                write!(f, "{t}")
            }
        };
        match &self.kind {
            TermKind::Var(n) => f.write_str(n),
            TermKind::Zero => f.write_str("0"),
            TermKind::Sum(a, b) => {
                write!(f, "{a}")?;
                match &b.kind {
                    TermKind::Scaled(k, inner) if *k < 0 => {
                        f.write_str(" - ")?;
                        if *k != -1 {
                            write!(f, "{}*", -k)?;
                        }
                        wrap(f, inner, 2)
                    }
                    _ => {
                        f.write_str(" + ")?;
                        wrap(f, b, 1)
                    }
                }
            }
            TermKind::Product(a, b) => {
                wrap(f, a, 2)?;
                f.write_str("*")?;
                wrap(f, b, 3)
            }
            TermKind::Scaled(k, a) => {
                match *k {
                    -1 => f.write_str("-")?,
                    k => write!(f, "{k}*")?,
                }
                wrap(f, a, 2)
            }
        }
    }
}
