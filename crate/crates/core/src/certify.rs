//! Certificates of ideal membership and the high-level proof driver.

use std::fmt::Write as _;

use indexmap::IndexMap;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::freealg::{Algebra, AlgebraError, Polynomial, Rational, Term, Word};
use crate::gb::{GbError, NCIdeal};
use crate::order::MonomialOrder;
use crate::quiver::Quiver;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CertifyError {
    #[error("certificate refers to assumption {index}, but only {available} exist")]
    IndexOutOfRange { index: usize, available: usize },
    #[error("The {role} {poly} is not compatible with the quiver")]
    QuiverIncompatible { role: &'static str, poly: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Gb(#[from] GbError),
}

/// One summand `left * assumptions[gen] * right` of a cofactor representation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Cofactor {
    pub left: Term,
    pub gen: usize,
    pub right: Term,
}

/// A two-sided linear combination of assumptions.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Certificate {
    triples: Vec<Cofactor>,
}

impl Certificate {
    pub fn new(triples: Vec<Cofactor>) -> Self {
        Certificate { triples }
    }

    pub fn triples(&self) -> &[Cofactor] {
        &self.triples
    }

    pub fn len(&self) -> usize {
        self.triples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triples.is_empty()
    }

    /// Σ left·assumptions[gen]·right, with plain arithmetic only.
    pub fn expand(&self, assumptions: &[Polynomial]) -> Result<Polynomial, CertifyError> {
        let mut parts = Vec::with_capacity(self.triples.len());
        for t in &self.triples {
            let g = assumptions
                .get(t.gen)
                .ok_or(CertifyError::IndexOutOfRange {
                    index: t.gen,
                    available: assumptions.len(),
                })?;
            parts.push(g.sandwich(&t.left, &t.right));
        }
        Ok(parts.into_iter().sum())
    }

    /// True when every cofactor coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.triples
            .iter()
            .all(|t| t.left.coeff.is_integer() && t.right.coeff.is_integer())
    }

    /// Moves coefficients to the left, merges equal multiples, drops zeros.
    pub fn normalized(&self) -> Certificate {
        let mut acc: IndexMap<(Word, usize, Word), Rational> = IndexMap::new();
        for t in &self.triples {
            let c = &t.left.coeff * &t.right.coeff;
            *acc.entry((t.left.word.clone(), t.gen, t.right.word.clone()))
                .or_insert_with(Rational::zero) += c;
        }
        Certificate {
            triples: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((l, gen, r), c)| Cofactor {
                    left: Term::new(c, l),
                    gen,
                    right: Term::monomial(r),
                })
                .collect(),
        }
    }

    /// Equality up to the order of summands.
    pub fn reorder_equivalent(&self, other: &Certificate) -> bool {
        let key = |c: &Certificate| {
            let mut v: Vec<(Vec<u32>, usize, Vec<u32>, Rational)> = c
                .normalized()
                .triples
                .into_iter()
                .map(|t| {
                    (
                        t.left.word.letters().iter().map(|v| v.0).collect(),
                        t.gen,
                        t.right.word.letters().iter().map(|v| v.0).collect(),
                        t.left.coeff,
                    )
                })
                .collect();
            v.sort();
            v
        };
        key(self) == key(other)
    }

    /// `(1,0,c), (d,1,1)`-style listing.
    pub fn format_tuples(&self, algebra: &Algebra) -> String {
        let items: Vec<String> = self
            .triples
            .iter()
            .map(|t| {
                format!(
                    "({},{},{})",
                    t.left.display(algebra),
                    t.gen,
                    t.right.display(algebra)
                )
            })
            .collect();
        format!("[{}]", items.join(", "))
    }

    /// `<expanded> = <sum of bracketed assumption instances>`.
    pub fn pretty(
        &self,
        assumptions: &[Polynomial],
        algebra: &Algebra,
        order: Option<&MonomialOrder>,
    ) -> Result<String, CertifyError> {
        let expanded = self.expand(assumptions)?;
        let mut out = String::new();
        write!(out, "{} = ", expanded.display(algebra).with_order(order)).unwrap();
        if self.triples.is_empty() {
            out.push('0');
        }
        for (i, t) in self.triples.iter().enumerate() {
            let coeff = &t.left.coeff * &t.right.coeff;
            let neg = coeff.is_negative();
            match (i, neg) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            let mag = coeff.abs();
            let mut factors: Vec<String> = Vec::new();
            if !mag.is_one() {
                factors.push(mag.to_string());
            }
            if !t.left.word.is_one() {
                factors.push(t.left.word.display(algebra).to_string());
            }
            factors.push(format!(
                "({})",
                assumptions[t.gen].display(algebra).with_order(order)
            ));
            if !t.right.word.is_one() {
                factors.push(t.right.word.display(algebra).to_string());
            }
            out.push_str(&factors.join("*"));
        }
        Ok(out)
    }
}

/// Outcome of a [`certify`] run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Status {
    Proved,
    Failed,
}

#[derive(Clone, Debug)]
pub struct CertifyReport {
    pub status: Status,
    /// One entry per claim; `None` where membership was not established.
    pub proofs: Vec<Option<Certificate>>,
    pub integer_clean: Vec<bool>,
    pub iterations_used: usize,
}

impl CertifyReport {
    pub fn proved(&self) -> bool {
        self.status == Status::Proved
    }
}

/// Diagnostics emitted while certifying.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Progress {
    Started,
    Iteration(usize),
    NonIntegral { claim: usize },
    Finished(Status),
}

impl Progress {
    /// The line printed for this event, if any.
    pub fn message(&self) -> Option<String> {
        match self {
            Progress::Started => {
                Some("Computing a (partial) Groebner basis and reducing the claims...\n".into())
            }
            Progress::Iteration(n) if n % 5 == 0 => Some(format!("Starting iteration {n}...")),
            Progress::Iteration(_) => None,
            Progress::NonIntegral { claim } => Some(format!(
                "Warning: the cofactor representation of claim {claim} has non-integer coefficients"
            )),
            Progress::Finished(Status::Proved) => {
                Some("Done! Ideal membership of all claims could be verified!".into())
            }
            Progress::Finished(Status::Failed) => {
                Some("Failed! Not all ideal memberships could be verified.".into())
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct CertifyOptions {
    pub maxiter: usize,
    pub maxdeg: Option<usize>,
    pub criterion: bool,
    pub order: Option<MonomialOrder>,
    pub quiver: Option<Quiver>,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        CertifyOptions {
            maxiter: 10,
            maxdeg: None,
            criterion: true,
            order: None,
            quiver: None,
        }
    }
}

/// Attempts to express every claim as a combination of the assumptions.
///
/// Claims are reduced after each completion iteration; the run stops as
/// soon as all of them reduce to zero or `maxiter` iterations have passed.
pub fn certify(
    assumptions: &[Polynomial],
    claims: &[Polynomial],
    nvars: usize,
    opts: &CertifyOptions,
    progress: &mut dyn FnMut(Progress),
) -> Result<CertifyReport, CertifyError> {
    if let Some(q) = &opts.quiver {
        for f in assumptions {
            if !q.is_compatible(f) {
                return Err(CertifyError::QuiverIncompatible {
                    role: "assumption",
                    poly: q.describe_poly(f),
                });
            }
        }
        for f in claims {
            if !q.is_compatible(f) {
                return Err(CertifyError::QuiverIncompatible {
                    role: "claim",
                    poly: q.describe_poly(f),
                });
            }
        }
    }
    let order = opts
        .order
        .clone()
        .unwrap_or_else(|| MonomialOrder::deglex(nvars));
    let mut ideal = NCIdeal::new(assumptions.to_vec(), order)?;
    for c in claims {
        ideal.check_poly(c)?;
    }
    progress(Progress::Started);
    let mut proofs: Vec<Option<Certificate>> = vec![None; claims.len()];
    let mut iterations = 0;
    loop {
        for (slot, claim) in proofs.iter_mut().zip(claims) {
            if slot.is_none() {
                let r = ideal.reduce(claim);
                if r.poly.is_zero() {
                    *slot = Some(r.cert);
                }
            }
        }
        if proofs.iter().all(Option::is_some) || iterations >= opts.maxiter {
            break;
        }
        progress(Progress::Iteration(iterations + 1));
        if !ideal.step(opts.maxdeg, opts.criterion) {
            break;
        }
        iterations += 1;
    }
    let status = if proofs.iter().all(Option::is_some) {
        Status::Proved
    } else {
        Status::Failed
    };
    let integer_clean: Vec<bool> = proofs
        .iter()
        .map(|p| p.as_ref().is_none_or(Certificate::is_integral))
        .collect();
    for (i, clean) in integer_clean.iter().enumerate() {
        if !clean {
            progress(Progress::NonIntegral { claim: i });
        }
    }
    progress(Progress::Finished(status.clone()));
    Ok(CertifyReport {
        status,
        proofs,
        integer_clean,
        iterations_used: iterations,
    })
}

/// `Σ left·g·right` expanded; convenience alias of [`Certificate::expand`].
pub fn expand_cofactors(
    cert: &Certificate,
    assumptions: &[Polynomial],
) -> Result<Polynomial, CertifyError> {
    cert.expand(assumptions)
}

pub fn pretty_print_proof(
    cert: &Certificate,
    assumptions: &[Polynomial],
    algebra: &Algebra,
) -> Result<String, CertifyError> {
    cert.pretty(assumptions, algebra, None)
}

impl Cofactor {
    pub fn new(left: Term, gen: usize, right: Term) -> Self {
        Cofactor { left, gen, right }
    }

    pub fn unit(gen: usize) -> Self {
        Cofactor::new(Term::one(), gen, Term::one())
    }
}

impl Term {
    pub fn scaled(&self, c: &Rational) -> Term {
        Term::new(&self.coeff * c, self.word.clone())
    }
}
