use std::collections::BTreeSet;
use std::fmt;

use super::formula::Formula;
use super::term::OpTerm;
use super::LogicError;

/// An equation or disequation, sides kept as written.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Literal {
    pub positive: bool,
    pub lhs: OpTerm,
    pub rhs: OpTerm,
}

impl Literal {
    pub fn new(positive: bool, lhs: OpTerm, rhs: OpTerm) -> Self {
        Literal { positive, lhs, rhs }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rel = if self.positive { "=" } else { "!=" };
        write!(f, "{} {rel} {}", self.lhs, self.rhs)
    }
}

/// `a_1 ≠ b_1 ∨ … ∨ s_1 = t_1 ∨ …`, with both lists sorted and free of
/// duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Clause {
    pub disequalities: Vec<(OpTerm, OpTerm)>,
    pub equalities: Vec<(OpTerm, OpTerm)>,
}

impl Clause {
    fn from_literals(lits: BTreeSet<Literal>) -> Self {
        let mut c = Clause {
            disequalities: Vec::new(),
            equalities: Vec::new(),
        };
        for l in lits {
            if l.positive {
                c.equalities.push((l.lhs, l.rhs));
            } else {
                c.disequalities.push((l.lhs, l.rhs));
            }
        }
        c
    }

    pub fn literals(&self) -> impl Iterator<Item = Literal> + '_ {
        self.disequalities
            .iter()
            .map(|(a, b)| Literal::new(false, a.clone(), b.clone()))
            .chain(self.equalities.iter().map(|(a, b)| Literal::new(true, a.clone(), b.clone())))
    }

    pub fn eval(&self, atom: &mut dyn FnMut(&OpTerm, &OpTerm) -> bool) -> bool {
        self.disequalities.iter().any(|(a, b)| !atom(a, b))
            || self.equalities.iter().any(|(a, b)| atom(a, b))
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.literals().map(|l| l.to_string()).collect();
        f.write_str(&parts.join(" | "))
    }
}

enum Nnf {
    Lit(Literal),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
}

fn nnf(f: &Formula, positive: bool) -> Result<Nnf, LogicError> {
    Ok(match f {
        Formula::Eq(s, t) => Nnf::Lit(Literal::new(positive, s.clone(), t.clone())),
        Formula::Not(a) => nnf(a, !positive)?,
        Formula::And(v) | Formula::Or(v) => {
            let parts = v.iter().map(|x| nnf(x, positive)).collect::<Result<Vec<_>, _>>()?;
            if matches!(f, Formula::And(_)) == positive {
                Nnf::And(parts)
            } else {
                Nnf::Or(parts)
            }
        }
        Formula::Implies(a, b) => {
            let (na, nb) = (nnf(a, !positive)?, nnf(b, positive)?);
            if positive {
                Nnf::Or(vec![na, nb])
            } else {
                Nnf::And(vec![na, nb])
            }
        }
        Formula::Forall(..) | Formula::Exists(..) => return Err(LogicError::NotQuantifierFree),
    })
}

fn clauses(n: Nnf) -> BTreeSet<BTreeSet<Literal>> {
    match n {
        Nnf::Lit(l) => BTreeSet::from([BTreeSet::from([l])]),
        Nnf::And(v) => v.into_iter().flat_map(clauses).collect(),
        Nnf::Or(v) => {
            let mut acc = BTreeSet::from([BTreeSet::new()]);
            for part in v {
                let cs = clauses(part);
                acc = acc
                    .iter()
                    .flat_map(|a| {
                        cs.iter().map(move |c| a.iter().chain(c).cloned().collect::<BTreeSet<_>>())
                    })
                    .collect();
            }
            acc
        }
    }
}

/// Conjunctive normal form of a quantifier-free formula: implications
/// eliminated, negations pushed to the equations, `∨` distributed over `∧`.
/// Clauses and their literals come out sorted and deduplicated.
pub fn cnf(f: &Formula) -> Result<Vec<Clause>, LogicError> {
    Ok(clauses(nnf(f, true)?)
        .into_iter()
        .map(Clause::from_literals)
        .collect())
}
