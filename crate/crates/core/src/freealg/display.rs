use std::fmt;

use num_traits::{One, Signed};

use super::{Algebra, Polynomial, Rational, Term, Word};
use crate::order::MonomialOrder;

/// Renders a word as `a*b^2*c`, or `1` for the empty word.
pub struct WordDisplay<'a> {
    pub word: &'a Word,
    pub algebra: &'a Algebra,
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let letters = self.word.letters();
        if letters.is_empty() {
            return f.write_str("1");
        }
        let mut i = 0;
        while i < letters.len() {
            let mut run = 1;
            while i + run < letters.len() && letters[i + run] == letters[i] {
                run += 1;
            }
            if i > 0 {
                f.write_str("*")?;
            }
            f.write_str(self.algebra.name(letters[i]))?;
            if run > 1 {
                write!(f, "^{run}")?;
            }
            i += run;
        }
        Ok(())
    }
}

/// Writes `|coeff|*word` with unit factors omitted.
pub(crate) fn write_magnitude(
    f: &mut fmt::Formatter<'_>,
    coeff: &Rational,
    word: &Word,
    algebra: &Algebra,
) -> fmt::Result {
    let mag = coeff.abs();
    match (mag.is_one(), word.is_one()) {
        (true, true) => f.write_str("1"),
        (true, false) => write!(f, "{}", WordDisplay { word, algebra }),
        (false, true) => write!(f, "{mag}"),
        (false, false) => write!(f, "{mag}*{}", WordDisplay { word, algebra }),
    }
}

/// Renders a single signed term.
pub struct TermDisplay<'a> {
    pub term: &'a Term,
    pub algebra: &'a Algebra,
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.term.coeff.is_negative() {
            f.write_str("-")?;
        }
        write_magnitude(f, &self.term.coeff, &self.term.word, self.algebra)
    }
}

/// Renders a polynomial with terms ascending, e.g. `-y + y*x`.
///
/// Without an explicit order the canonical degree-lex order by declaration
/// rank is used.
pub struct PolyDisplay<'a> {
    pub poly: &'a Polynomial,
    pub algebra: &'a Algebra,
    pub order: Option<&'a MonomialOrder>,
}

impl<'a> PolyDisplay<'a> {
    pub fn new(poly: &'a Polynomial, algebra: &'a Algebra) -> Self {
        PolyDisplay {
            poly,
            algebra,
            order: None,
        }
    }

    pub fn with_order(mut self, order: Option<&'a MonomialOrder>) -> Self {
        self.order = order;
        self
    }
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return f.write_str("0");
        }
        let mut terms: Vec<&Term> = self.poly.terms().iter().collect();
        match self.order {
            Some(o) => terms.sort_by(|a, b| o.cmp_words(&a.word, &b.word)),
            None => terms.reverse(),
        }
        for (i, t) in terms.iter().enumerate() {
            let neg = t.coeff.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            write_magnitude(f, &t.coeff, &t.word, self.algebra)?;
        }
        Ok(())
    }
}

impl Polynomial {
    pub fn display<'a>(&'a self, algebra: &'a Algebra) -> PolyDisplay<'a> {
        PolyDisplay::new(self, algebra)
    }
}

impl Word {
    pub fn display<'a>(&'a self, algebra: &'a Algebra) -> WordDisplay<'a> {
        WordDisplay { word: self, algebra }
    }
}

impl Term {
    pub fn display<'a>(&'a self, algebra: &'a Algebra) -> TermDisplay<'a> {
        TermDisplay { term: self, algebra }
    }
}
