//! Domain/codomain typing of variables as a labelled multigraph.

use std::collections::BTreeSet;
use std::fmt;

use crate::freealg::{Algebra, Polynomial, Var, Word};

/// A pair (domain, codomain).
pub type Signature = (String, String);

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub source: String,
    pub target: String,
    pub label: Var,
}

/// Labelled quiver; a label may sit on several edges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quiver {
    edges: Vec<Edge>,
    algebra: Algebra,
}

impl Quiver {
    pub fn new(edges: Vec<Edge>, algebra: &Algebra) -> Self {
        Quiver {
            edges,
            algebra: algebra.clone(),
        }
    }

    /// Builds a quiver from `(source, target, label)` name triples.
    pub fn from_triples(
        triples: &[(&str, &str, &str)],
        algebra: &Algebra,
    ) -> Result<Self, crate::freealg::AlgebraError> {
        let edges = triples
            .iter()
            .map(|&(s, t, l)| {
                Ok(Edge {
                    source: s.to_string(),
                    target: t.to_string(),
                    label: algebra.var(l)?,
                })
            })
            .collect::<Result<Vec<_>, crate::freealg::AlgebraError>>()?;
        Ok(Quiver::new(edges, algebra))
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertices(&self) -> BTreeSet<&str> {
        self.edges
            .iter()
            .flat_map(|e| [e.source.as_str(), e.target.as_str()])
            .collect()
    }

    pub fn signatures_of_var(&self, v: Var) -> BTreeSet<Signature> {
        self.edges
            .iter()
            .filter(|e| e.label == v)
            .map(|e| (e.source.clone(), e.target.clone()))
            .collect()
    }

    /// All (source, target) pairs along which `w` can be read as a path,
    /// with the rightmost letter applied first.
    pub fn signatures(&self, w: &Word) -> BTreeSet<Signature> {
        let mut states: BTreeSet<Signature> = self
            .vertices()
            .into_iter()
            .map(|u| (u.to_string(), u.to_string()))
            .collect();
        for &v in w.letters().iter().rev() {
            states = states
                .iter()
                .flat_map(|(start, cur)| {
                    self.edges
                        .iter()
                        .filter(move |e| e.label == v && &e.source == cur)
                        .map(move |e| (start.clone(), e.target.clone()))
                })
                .collect();
            if states.is_empty() {
                break;
            }
        }
        states
    }

    /// Signatures shared by every monomial of `p`; `None` stands for "any"
    /// (the zero polynomial).
    pub fn poly_signatures(&self, p: &Polynomial) -> Option<BTreeSet<Signature>> {
        let mut acc: Option<BTreeSet<Signature>> = None;
        for t in p.terms() {
            let s = self.signatures(&t.word);
            acc = Some(match acc {
                None => s,
                Some(prev) => prev.intersection(&s).cloned().collect(),
            });
        }
        acc
    }

    pub fn is_compatible(&self, p: &Polynomial) -> bool {
        self.poly_signatures(p).is_none_or(|s| !s.is_empty())
    }

    pub fn describe_poly(&self, p: &Polynomial) -> String {
        p.display(&self.algebra).to_string()
    }
}

impl fmt::Display for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let labels: BTreeSet<&str> = self.edges.iter().map(|e| self.algebra.name(e.label)).collect();
        write!(
            f,
            "Labelled quiver with {} vertices in the labels {{{}}}",
            self.vertices().len(),
            labels.into_iter().collect::<Vec<_>>().join(", ")
        )
    }
}
