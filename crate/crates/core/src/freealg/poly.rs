use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed, Zero};

use super::{Var, Word};

pub use num_rational::BigRational as Rational;

/// A nonzero rational multiple of a word.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Term {
    pub coeff: Rational,
    pub word: Word,
}

impl Term {
    pub fn new(coeff: Rational, word: Word) -> Self {
        Term { coeff, word }
    }

    pub fn monomial(word: Word) -> Self {
        Term::new(Rational::one(), word)
    }

    pub fn one() -> Self {
        Term::monomial(Word::one())
    }

    pub fn is_integral(&self) -> bool {
        self.coeff.is_integer()
    }
}

impl From<Var> for Term {
    fn from(v: Var) -> Self {
        Term::monomial(Word::from(v))
    }
}

/// A noncommutative polynomial with rational coefficients.
///
/// Terms are kept sorted descending by the canonical word order, with
/// distinct words and no zero coefficients, so structural equality is
/// polynomial equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Polynomial {
    terms: Vec<Term>,
}

impl Polynomial {
    pub fn zero() -> Self {
        Polynomial { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Polynomial::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Polynomial::from_terms([Term::new(c, Word::one())])
    }

    pub fn from_word(word: Word) -> Self {
        Polynomial::from_terms([Term::monomial(word)])
    }

    /// Collects arbitrary terms, merging equal words and dropping zeros.
    pub fn from_terms<I: IntoIterator<Item = Term>>(terms: I) -> Self {
        let mut acc: BTreeMap<Word, Rational> = BTreeMap::new();
        for t in terms {
            *acc.entry(t.word).or_insert_with(Rational::zero) += t.coeff;
        }
        let terms = acc
            .into_iter()
            .rev()
            .filter(|(_, c)| !c.is_zero())
            .map(|(word, coeff)| Term { coeff, word })
            .collect();
        Polynomial { terms }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<Term> {
        self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.terms.iter().map(|t| t.word.degree()).max()
    }

    pub fn coeff_of(&self, word: &Word) -> Rational {
        self.terms
            .iter()
            .find(|t| &t.word == word)
            .map(|t| t.coeff.clone())
            .unwrap_or_else(Rational::zero)
    }

    pub fn words(&self) -> impl Iterator<Item = &Word> {
        self.terms.iter().map(|t| &t.word)
    }

    pub fn vars(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = self
            .terms
            .iter()
            .flat_map(|t| t.word.letters().iter().copied())
            .collect();
        vs.sort();
        vs.dedup();
        vs
    }

    pub fn scale(&self, c: &Rational) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero();
        }
        Polynomial {
            terms: self
                .terms
                .iter()
                .map(|t| Term::new(&t.coeff * c, t.word.clone()))
                .collect(),
        }
    }

    /// `left * self * right` for terms `left`, `right`.
    pub fn sandwich(&self, left: &Term, right: &Term) -> Polynomial {
        let c = &left.coeff * &right.coeff;
        Polynomial::from_terms(self.terms.iter().map(|t| {
            Term::new(
                &t.coeff * &c,
                left.word.concat(&t.word).concat(&right.word),
            )
        }))
    }

    /// True when every coefficient is an integer.
    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(Term::is_integral)
    }

    /// `Some(λ)` with `self = λ·other`, when such a rational exists.
    pub fn scalar_ratio(&self, other: &Polynomial) -> Option<Rational> {
        if self.terms.len() != other.terms.len() || other.is_zero() {
            return None;
        }
        let lambda = &self.terms[0].coeff / &other.terms[0].coeff;
        let same = self
            .terms
            .iter()
            .zip(&other.terms)
            .all(|(a, b)| a.word == b.word && a.coeff == &b.coeff * &lambda);
        same.then_some(lambda)
    }

    /// Sign-normalized copy whose canonical first term is positive.
    pub fn abs_normalized(&self) -> Polynomial {
        match self.terms.first() {
            Some(t) if t.coeff.is_negative() => -self.clone(),
            _ => self.clone(),
        }
    }
}

impl From<Var> for Polynomial {
    fn from(v: Var) -> Self {
        Polynomial::from_word(Word::from(v))
    }
}

impl From<Term> for Polynomial {
    fn from(t: Term) -> Self {
        Polynomial::from_terms([t])
    }
}

impl From<Word> for Polynomial {
    fn from(w: Word) -> Self {
        Polynomial::from_word(w)
    }
}

fn merge(a: &[Term], b: &[Term], negate_b: bool) -> Vec<Term> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    let take_b = |t: &Term| {
        if negate_b {
            Term::new(-t.coeff.clone(), t.word.clone())
        } else {
            t.clone()
        }
    };
    while i < a.len() && j < b.len() {
        match a[i].word.cmp(&b[j].word) {
            std::cmp::Ordering::Greater => {
                out.push(a[i].clone());
                i += 1;
            }
            std::cmp::Ordering::Less => {
                out.push(take_b(&b[j]));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let c = if negate_b {
                    &a[i].coeff - &b[j].coeff
                } else {
                    &a[i].coeff + &b[j].coeff
                };
                if !c.is_zero() {
                    out.push(Term::new(c, a[i].word.clone()));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out.extend(a[i..].iter().cloned());
    out.extend(b[j..].iter().map(take_b));
    out
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        Polynomial {
            terms: merge(&self.terms, &rhs.terms, false),
        }
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        Polynomial {
            terms: merge(&self.terms, &rhs.terms, true),
        }
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        Polynomial::from_terms(self.terms.iter().flat_map(|a| {
            rhs.terms
                .iter()
                .map(move |b| Term::new(&a.coeff * &b.coeff, a.word.concat(&b.word)))
        }))
    }
}

impl Neg for Polynomial {
    type Output = Polynomial;
    fn neg(mut self) -> Polynomial {
        for t in &mut self.terms {
            t.coeff = -t.coeff.clone();
        }
        self
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        -self.clone()
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Polynomial> for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: &Polynomial) -> Polynomial {
                (&self).$m(rhs)
            }
        }
        impl $tr<Polynomial> for &Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                self.$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Zero for Polynomial {
    fn zero() -> Self {
        Polynomial::zero()
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for Polynomial {
    fn one() -> Self {
        Polynomial::one()
    }
}

impl std::iter::Sum for Polynomial {
    fn sum<I: Iterator<Item = Polynomial>>(iter: I) -> Self {
        Polynomial::from_terms(iter.flat_map(Polynomial::into_terms))
    }
}
