//! The machine-readable certificate document and its independent check.

use std::str::FromStr;

use opcert_core::{Algebra, Certificate, Cofactor, Polynomial, Rational, Term};
use serde::{Deserialize, Serialize};

use crate::error::CliError;
use crate::problem::{Body, Problem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DocStatus {
    Proved,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleRecord {
    pub left_coeff: String,
    pub left_word: String,
    pub gen_index: usize,
    pub right_coeff: String,
    pub right_word: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimRecord {
    pub claim: String,
    pub certificate: Option<Vec<TripleRecord>>,
    pub integer_clean: bool,
    /// Only for statement proofs: the ideal generators the certificate
    /// refers to.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generators: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub instance: usize,
    pub var: String,
    pub term: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub seconds: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub status: DocStatus,
    pub claims: Vec<ClaimRecord>,
    pub iterations: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witnesses: Option<Vec<Witness>>,
    pub timing: Timing,
    pub version: String,
}

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

impl CertificateDocument {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serialises");
        s.push('\n');
        s
    }

    pub fn from_json(src: &str) -> Result<Self, CliError> {
        serde_json::from_str(src).map_err(|e| CliError::Document(e.to_string()))
    }
}

fn word_string(t: &Term, algebra: &Algebra) -> String {
    t.word.display(algebra).to_string()
}

impl TripleRecord {
    pub fn new(c: &Cofactor, algebra: &Algebra) -> Self {
        TripleRecord {
            left_coeff: c.left.coeff.to_string(),
            left_word: word_string(&c.left, algebra),
            gen_index: c.gen,
            right_coeff: c.right.coeff.to_string(),
            right_word: word_string(&c.right, algebra),
        }
    }

    fn to_cofactor(&self, algebra: &Algebra) -> Result<Cofactor, CliError> {
        let term = |coeff: &str, word: &str| -> Result<Term, CliError> {
            let c = Rational::from_str(coeff.trim())
                .map_err(|e| CliError::Document(format!("coefficient `{coeff}`: {e}")))?;
            let w = algebra
                .parse_word(word)
                .map_err(|e| CliError::Document(format!("word `{word}`: {e}")))?;
            Ok(Term::new(c, w))
        };
        Ok(Cofactor::new(
            term(&self.left_coeff, &self.left_word)?,
            self.gen_index,
            term(&self.right_coeff, &self.right_word)?,
        ))
    }
}

pub fn records(cert: &Certificate, algebra: &Algebra) -> Vec<TripleRecord> {
    cert.triples().iter().map(|c| TripleRecord::new(c, algebra)).collect()
}

/// Rebuilds a certificate, rejecting generator indices beyond `available`.
pub fn certificate(
    triples: &[TripleRecord],
    algebra: &Algebra,
    available: usize,
) -> Result<Certificate, CliError> {
    let cofactors = triples
        .iter()
        .map(|t| {
            if t.gen_index >= available {
                return Err(CliError::Document(format!(
                    "generator index {} out of range (only {available} generators)",
                    t.gen_index
                )));
            }
            t.to_cofactor(algebra)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Certificate::new(cofactors))
}

/// Claims whose certificate does not check out, with the reason.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VerifyReport {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl VerifyReport {
    pub fn accepted(&self) -> bool {
        self.failures.is_empty()
    }
}

fn parse_poly(src: &str, algebra: &Algebra) -> Result<Polynomial, CliError> {
    algebra
        .parse(src)
        .map_err(|e| CliError::Document(format!("`{src}`: {e}")))
}

/// Re-expands every certificate by plain arithmetic and compares with the
/// problem's claims. Malformed documents are errors; wrong ones are
/// reported as failures.
pub fn verify(problem: &Problem, doc: &CertificateDocument) -> Result<VerifyReport, CliError> {
    let alg = &problem.algebra;
    let mut report = VerifyReport::default();
    if doc.status != DocStatus::Proved {
        report.failures.push("document status is not `proved`".into());
    }
    let claims: Vec<Polynomial> = match &problem.body {
        Body::Claims(c) => {
            if c.len() != doc.claims.len() {
                report.failures.push(format!(
                    "document has {} claims, problem has {}",
                    doc.claims.len(),
                    c.len()
                ));
                return Ok(report);
            }
            c.clone()
        }
        Body::Statement(_) => doc
            .claims
            .iter()
            .map(|r| parse_poly(&r.claim, alg))
            .collect::<Result<_, _>>()?,
        Body::Empty => return Err(CliError::Usage("problem has neither claims nor a statement".into())),
    };
    for (i, (claim, rec)) in claims.iter().zip(&doc.claims).enumerate() {
        let name = format!("claim {i} `{}`", claim.display(alg));
        let gens: Vec<Polynomial> = match (&problem.body, &rec.generators) {
            (Body::Claims(_), None) => problem.assumptions.clone(),
            (Body::Statement(_), Some(g)) => g.iter().map(|s| parse_poly(s, alg)).collect::<Result<_, _>>()?,
            _ => return Err(CliError::Document(format!("{name}: unexpected generator list"))),
        };
        let Some(triples) = &rec.certificate else {
            report.failures.push(format!("{name}: no certificate"));
            continue;
        };
        let cert = certificate(triples, alg, gens.len())?;
        let expanded = cert.expand(&gens).map_err(|e| CliError::Document(e.to_string()))?;
        report.checked += 1;
        if &expanded != claim {
            report.failures.push(format!(
                "{name}: certificate expands to `{}`",
                expanded.display(alg)
            ));
        } else if rec.integer_clean != cert.is_integral() {
            report.failures.push(format!("{name}: integer_clean flag is wrong"));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use opcert_core::Word;

    #[test]
    fn triples_round_trip() {
        let alg = Algebra::new(["a", "b"]).unwrap();
        let c = Cofactor::new(
            Term::new(Rational::new((-3).into(), 2.into()), alg.parse_word("a*b^2").unwrap()),
            1,
            Term::new(Rational::from_integer(1.into()), Word::one()),
        );
        let rec = TripleRecord::new(&c, &alg);
        assert_eq!(rec.left_coeff, "-3/2");
        assert_eq!(rec.right_word, "1");
        assert_eq!(rec.to_cofactor(&alg).unwrap(), c);
        assert!(certificate(&[rec], &alg, 1).is_err());
    }
}
