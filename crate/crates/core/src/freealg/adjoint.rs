use super::{Algebra, AlgebraError, Polynomial, Term, Var, Word};

/// Involutive pairing of variables modelling the adjoint operation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjointMap {
    partner: Vec<Option<Var>>,
    names: Vec<String>,
}

impl AdjointMap {
    /// Pairs every `x` with `x_adj` when both are declared.
    pub fn by_suffix(algebra: &Algebra) -> Self {
        let mut partner = vec![None; algebra.len()];
        for v in algebra.vars() {
            if let Some(w) = algebra.get(&format!("{}_adj", algebra.name(v))) {
                partner[v.index()] = Some(w);
                partner[w.index()] = Some(v);
            }
        }
        AdjointMap {
            partner,
            names: algebra.names().to_vec(),
        }
    }

    /// Builds the map from explicit pairs; a pair `(x, x)` declares `x` self-adjoint.
    pub fn from_pairs(algebra: &Algebra, pairs: &[(Var, Var)]) -> Result<Self, AlgebraError> {
        let mut partner: Vec<Option<Var>> = vec![None; algebra.len()];
        for &(x, y) in pairs {
            for (from, to) in [(x, y), (y, x)] {
                match partner[from.index()] {
                    Some(prev) if prev != to => {
                        return Err(AlgebraError::NotInvolutive(algebra.name(from).to_string()))
                    }
                    _ => partner[from.index()] = Some(to),
                }
            }
        }
        Ok(AdjointMap {
            partner,
            names: algebra.names().to_vec(),
        })
    }

    pub fn partner(&self, v: Var) -> Option<Var> {
        self.partner.get(v.index()).copied().flatten()
    }

    fn map_var(&self, v: Var) -> Result<Var, AlgebraError> {
        self.partner(v).ok_or_else(|| {
            AlgebraError::MissingAdjoint(
                self.names
                    .get(v.index())
                    .cloned()
                    .unwrap_or_else(|| format!("#{}", v.0)),
            )
        })
    }

    pub fn adjoint_word(&self, w: &Word) -> Result<Word, AlgebraError> {
        w.letters().iter().rev().map(|&v| self.map_var(v)).collect()
    }

    /// Reverses every word and maps each letter to its partner.
    pub fn adjoint(&self, p: &Polynomial) -> Result<Polynomial, AlgebraError> {
        let terms = p
            .terms()
            .iter()
            .map(|t| Ok(Term::new(t.coeff.clone(), self.adjoint_word(&t.word)?)))
            .collect::<Result<Vec<_>, AlgebraError>>()?;
        Ok(Polynomial::from_terms(terms))
    }
}

/// The four Penrose identities for `b` as generalized inverse of `a`.
pub fn pinv(a: &Polynomial, b: &Polynomial, a_adj: &Polynomial, b_adj: &Polynomial) -> Vec<Polynomial> {
    vec![
        a * b * a - a,
        b * a * b - b,
        b_adj * a_adj - a * b,
        a_adj * b_adj - b * a,
    ]
}

/// Appends the adjoint of every element, skipping scalar multiples of
/// polynomials already in the list.
pub fn add_adj(fs: &[Polynomial], map: &AdjointMap) -> Result<Vec<Polynomial>, AlgebraError> {
    let mut out = fs.to_vec();
    for f in fs {
        let g = map.adjoint(f)?;
        if g.is_zero() || out.iter().any(|h| g.scalar_ratio(h).is_some()) {
            continue;
        }
        out.push(g);
    }
    Ok(out)
}
