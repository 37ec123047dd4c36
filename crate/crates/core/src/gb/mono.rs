//! Internal monomial encoding whose derived `Ord` is the monomial order.


use indexmap::IndexMap;
use num_traits::{One, Zero};

use crate::freealg::{Polynomial, Rational, Term, Word};
use crate::order::MonomialOrder;

/// Block-degree vector (top block first) followed by letter ranks.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub(crate) struct Mono(Vec<u16>);

#[derive(Clone, Debug)]
pub(crate) struct MonoCtx {
    nb: usize,
    block_of_rank: Vec<u16>,
}

impl MonoCtx {
    pub fn new(order: &MonomialOrder) -> Self {
        let block_of_rank = (0..order.num_vars() as u16)
            .map(|r| order.block_of_rank(r))
            .collect();
        MonoCtx {
            nb: order.num_blocks(),
            block_of_rank,
        }
    }

    pub fn letters<'m>(&self, m: &'m Mono) -> &'m [u16] {
        &m.0[self.nb..]
    }

    fn slot(&self, rank: u16) -> usize {
        self.nb - 1 - self.block_of_rank[rank as usize] as usize
    }

    pub fn mono_of(&self, letters: &[u16]) -> Mono {
        let mut data = vec![0u16; self.nb + letters.len()];
        for &r in letters {
            data[self.slot(r)] += 1;
        }
        data[self.nb..].copy_from_slice(letters);
        Mono(data)
    }

    pub fn sandwich(&self, left: &[u16], m: &Mono, right: &[u16]) -> Mono {
        let inner = self.letters(m);
        let mut data = Vec::with_capacity(self.nb + left.len() + inner.len() + right.len());
        data.extend_from_slice(&m.0[..self.nb]);
        for &r in left.iter().chain(right) {
            data[self.slot(r)] += 1;
        }
        data.extend_from_slice(left);
        data.extend_from_slice(inner);
        data.extend_from_slice(right);
        Mono(data)
    }

    pub fn encode_letters(order: &MonomialOrder, w: &Word) -> Vec<u16> {
        w.letters().iter().map(|&v| order.rank(v)).collect()
    }

    pub fn encode(&self, order: &MonomialOrder, w: &Word) -> Mono {
        self.mono_of(&Self::encode_letters(order, w))
    }

    pub fn decode_letters(order: &MonomialOrder, letters: &[u16]) -> Word {
        letters.iter().map(|&r| order.var_at_rank(r)).collect()
    }

    pub fn decode(&self, order: &MonomialOrder, m: &Mono) -> Word {
        Self::decode_letters(order, self.letters(m))
    }

    pub fn encode_poly(&self, order: &MonomialOrder, p: &Polynomial) -> IPoly {
        let mut terms: Vec<(Mono, Rational)> = p
            .terms()
            .iter()
            .map(|t| (self.encode(order, &t.word), t.coeff.clone()))
            .collect();
        terms.sort_by(|a, b| b.0.cmp(&a.0));
        IPoly(terms)
    }

    pub fn decode_poly(&self, order: &MonomialOrder, p: &IPoly) -> Polynomial {
        Polynomial::from_terms(
            p.0.iter()
                .map(|(m, c)| Term::new(c.clone(), self.decode(order, m))),
        )
    }
}

/// Polynomial with terms sorted descending in the monomial order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct IPoly(pub Vec<(Mono, Rational)>);

impl IPoly {
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn scale(&mut self, c: &Rational) {
        for (_, x) in &mut self.0 {
            *x *= c;
        }
    }

    /// `self -= c * other` for two sorted polynomials.
    pub fn sub_scaled(&mut self, c: &Rational, other: &IPoly) {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let mut a = std::mem::take(&mut self.0).into_iter().peekable();
        let mut b = other.0.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => match x.0.cmp(&y.0) {
                    std::cmp::Ordering::Greater => out.push(a.next().unwrap()),
                    std::cmp::Ordering::Less => {
                        let (m, k) = b.next().unwrap();
                        out.push((m.clone(), -(k * c)));
                    }
                    std::cmp::Ordering::Equal => {
                        let (m, k) = a.next().unwrap();
                        let (_, l) = b.next().unwrap();
                        let v = k - l * c;
                        if !v.is_zero() {
                            out.push((m, v));
                        }
                    }
                },
                (Some(_), None) => out.push(a.next().unwrap()),
                (None, Some(_)) => {
                    let (m, k) = b.next().unwrap();
                    out.push((m.clone(), -(k * c)));
                }
                (None, None) => break,
            }
        }
        self.0 = out;
    }

    pub fn make_monic(&mut self) -> Rational {
        let inv = match self.0.first() {
            Some((_, c)) => c.recip(),
            None => return Rational::one(),
        };
        self.scale(&inv);
        inv
    }
}

/// Key of a two-sided multiple `left * element * right`.
pub(crate) type CombKey = (Vec<u16>, usize, Vec<u16>);

/// Sparse linear combination of two-sided multiples, in insertion order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub(crate) struct LinComb(pub IndexMap<CombKey, Rational>);

impl LinComb {
    pub fn single(left: Vec<u16>, idx: usize, right: Vec<u16>, c: Rational) -> Self {
        let mut m = IndexMap::new();
        m.insert((left, idx, right), c);
        LinComb(m)
    }

    pub fn add(&mut self, key: CombKey, c: Rational) {
        let slot = self.0.entry(key).or_insert_with(Rational::zero);
        *slot += c;
    }

    /// `self += c * left * other * right`.
    pub fn add_sandwich(&mut self, c: &Rational, left: &[u16], other: &LinComb, right: &[u16]) {
        for ((l, k, r), x) in &other.0 {
            let mut nl = Vec::with_capacity(left.len() + l.len());
            nl.extend_from_slice(left);
            nl.extend_from_slice(l);
            let mut nr = Vec::with_capacity(r.len() + right.len());
            nr.extend_from_slice(r);
            nr.extend_from_slice(right);
            self.add((nl, *k, nr), x * c);
        }
    }

    pub fn scale(&mut self, c: &Rational) {
        for x in self.0.values_mut() {
            *x *= c;
        }
    }

    pub fn prune(&mut self) {
        self.0.retain(|_, c| !c.is_zero());
    }
}
