use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::term::{OpTerm, SortContext};
use super::LogicError;

/// First-order formula over operator equations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(OpTerm, OpTerm),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(Vec<String>, Box<Formula>),
    Exists(Vec<String>, Box<Formula>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Shape {
    /// `∀x: φ` with quantifier-free `φ` (no prefix at all counts too).
    Universal,
    Existential,
    ForallExists,
    Other,
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Shape::Universal => "universal",
            Shape::Existential => "existential",
            Shape::ForallExists => "forall-exists",
            Shape::Other => "other",
        })
    }
}

impl Formula {
    pub fn eq(s: OpTerm, t: OpTerm) -> Result<Self, LogicError> {
        if s.sort() != t.sort() {
            return Err(LogicError::SortMismatch {
                op: "equation",
                left: s.sort().clone(),
                right: t.sort().clone(),
            });
        }
        Ok(Formula::Eq(s, t))
    }

    /// `s ≠ t`, sugar for `¬(s = t)`.
    pub fn neq(s: OpTerm, t: OpTerm) -> Result<Self, LogicError> {
        Ok(Formula::Not(Box::new(Formula::eq(s, t)?)))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(vars: Vec<String>, body: Formula) -> Self {
        if vars.is_empty() {
            body
        } else {
            Formula::Forall(vars, Box::new(body))
        }
    }

    pub fn exists(vars: Vec<String>, body: Formula) -> Self {
        if vars.is_empty() {
            body
        } else {
            Formula::Exists(vars, Box::new(body))
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Eq(..) => true,
            Formula::Not(a) => a.is_quantifier_free(),
            Formula::And(v) | Formula::Or(v) => v.iter().all(Formula::is_quantifier_free),
            Formula::Implies(a, b) => a.is_quantifier_free() && b.is_quantifier_free(),
            Formula::Forall(..) | Formula::Exists(..) => false,
        }
    }

    /// Splits `∀x ∃y: φ` into its prefix variables and matrix. Nested
    /// quantifiers of the same kind are merged.
    pub fn prefix(&self) -> (Vec<String>, Vec<String>, &Formula) {
        let mut univ = Vec::new();
        let mut f = self;
        while let Formula::Forall(v, body) = f {
            univ.extend(v.iter().cloned());
            f = body;
        }
        let mut exist = Vec::new();
        while let Formula::Exists(v, body) = f {
            exist.extend(v.iter().cloned());
            f = body;
        }
        (univ, exist, f)
    }

    pub fn shape(&self) -> Shape {
        let (univ, exist, matrix) = self.prefix();
        if !matrix.is_quantifier_free() {
            return Shape::Other;
        }
        match (univ.is_empty(), exist.is_empty()) {
            (_, true) => Shape::Universal,
            (true, false) => Shape::Existential,
            (false, false) => Shape::ForallExists,
        }
    }

    /// Free variables, where the adjoint partner of a bound variable counts
    /// as bound along with it.
    pub fn free_vars(&self, ctx: &SortContext) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(ctx, &mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, ctx: &SortContext, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        match self {
            Formula::Eq(s, t) => {
                let mut vs = BTreeSet::new();
                s.collect_vars(&mut vs);
                t.collect_vars(&mut vs);
                for v in vs {
                    let covered = bound
                        .iter()
                        .any(|b| *b == v || ctx.partner(b) == Some(v.as_str()));
                    if !covered {
                        out.insert(v);
                    }
                }
            }
            Formula::Not(a) => a.collect_free(ctx, bound, out),
            Formula::And(v) | Formula::Or(v) => {
                for f in v {
                    f.collect_free(ctx, bound, out);
                }
            }
            Formula::Implies(a, b) => {
                a.collect_free(ctx, bound, out);
                b.collect_free(ctx, bound, out);
            }
            Formula::Forall(vs, body) | Formula::Exists(vs, body) => {
                let n = bound.len();
                bound.extend(vs.iter().cloned());
                body.collect_free(ctx, bound, out);
                bound.truncate(n);
            }
        }
    }

    /// Substitutes terms for variables in a quantifier-free formula.
    pub fn substitute(&self, map: &BTreeMap<String, OpTerm>) -> Result<Formula, LogicError> {
        Ok(match self {
            Formula::Eq(s, t) => Formula::eq(s.substitute(map)?, t.substitute(map)?)?,
            Formula::Not(a) => !a.substitute(map)?,
            Formula::And(v) => Formula::And(v.iter().map(|f| f.substitute(map)).collect::<Result<_, _>>()?),
            Formula::Or(v) => Formula::Or(v.iter().map(|f| f.substitute(map)).collect::<Result<_, _>>()?),
            Formula::Implies(a, b) => Formula::implies(a.substitute(map)?, b.substitute(map)?),
            Formula::Forall(..) | Formula::Exists(..) => return Err(LogicError::NotQuantifierFree),
        })
    }

    /// Truth value of a quantifier-free formula, given the value of each
    /// equation.
    pub fn eval(&self, atom: &mut dyn FnMut(&OpTerm, &OpTerm) -> bool) -> Result<bool, LogicError> {
        Ok(match self {
            Formula::Eq(s, t) => atom(s, t),
            Formula::Not(a) => !a.eval(atom)?,
            Formula::And(v) => {
                let mut r = true;
                for f in v {
                    r &= f.eval(atom)?;
                }
                r
            }
            Formula::Or(v) => {
                let mut r = false;
                for f in v {
                    r |= f.eval(atom)?;
                }
                r
            }
            Formula::Implies(a, b) => !a.eval(atom)? || b.eval(atom)?,
            Formula::Forall(..) | Formula::Exists(..) => return Err(LogicError::NotQuantifierFree),
        })
    }
}

impl std::ops::Not for Formula {
    type Output = Formula;

    fn not(self) -> Formula {
        Formula::Not(Box::new(self))
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |f: &mut fmt::Formatter<'_>, v: &[Formula], sep: &str| {
            f.write_str("(")?;
            for (i, x) in v.iter().enumerate() {
                if i > 0 {
                    f.write_str(sep)?;
                }
                write!(f, "{x}")?;
            }
            f.write_str(")")
        };
        match self {
            Formula::Eq(s, t) => write!(f, "{s} = {t}"),
            Formula::Not(a) => match a.as_ref() {
                Formula::Eq(s, t) => write!(f, "{s} != {t}"),
                a => write!(f, "~({a})"),
            },
            Formula::And(v) => join(f, v, " & "),
            Formula::Or(v) => join(f, v, " | "),
            Formula::Implies(a, b) => write!(f, "({a} -> {b})"),
            Formula::Forall(vs, b) => write!(f, "forall {}: {b}", vs.join(", ")),
            Formula::Exists(vs, b) => write!(f, "exists {}: {b}", vs.join(", ")),
        }
    }
}

/// A formula together with the sorts of its symbols.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorStatement {
    pub formula: Formula,
    pub sorts: SortContext,
}

impl OperatorStatement {
    pub fn new(formula: Formula, sorts: SortContext) -> Self {
        OperatorStatement { formula, sorts }
    }

    pub fn shape(&self) -> Shape {
        self.formula.shape()
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        self.formula.free_vars(&self.sorts)
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }
}

impl fmt::Display for OperatorStatement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.formula)
    }
}
