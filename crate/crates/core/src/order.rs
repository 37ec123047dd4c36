//! Admissible monomial orders on words.

use std::cmp::Ordering;

use thiserror::Error;

use crate::freealg::{Algebra, Polynomial, Term, Var, Word};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OrderError {
    #[error("variable #{0} is not covered by the order")]
    ForeignLetter(u32),
    #[error("variable #{0} appears more than once in the order")]
    Repeated(u32),
    #[error("order covers {covered} of {total} variables")]
    Incomplete { covered: usize, total: usize },
    #[error("order blocks must be non-empty")]
    EmptyBlock,
    #[error("leading term of the zero polynomial")]
    ZeroPolynomial,
}

/// Degree-left-lexicographic order, optionally refined into elimination blocks.
///
/// Blocks are ascending: every letter of a later block dominates all words
/// over earlier blocks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    blocks: Vec<Vec<Var>>,
    rank: Vec<u16>,
    block_of: Vec<u16>,
    by_rank: Vec<Var>,
}

impl MonomialOrder {
    /// Degree-lex with the algebra's declaration order.
    pub fn deglex(nvars: usize) -> Self {
        Self::from_blocks(vec![(0..nvars as u32).map(Var).collect()], nvars)
            .expect("declaration order is a valid order")
    }

    pub fn for_algebra(algebra: &Algebra) -> Self {
        Self::deglex(algebra.len())
    }

    pub fn from_sequence(vars: Vec<Var>, nvars: usize) -> Result<Self, OrderError> {
        Self::from_blocks(vec![vars], nvars)
    }

    pub fn from_blocks(blocks: Vec<Vec<Var>>, nvars: usize) -> Result<Self, OrderError> {
        const UNSET: u16 = u16::MAX;
        let mut rank = vec![UNSET; nvars];
        let mut block_of = vec![UNSET; nvars];
        let mut by_rank = Vec::with_capacity(nvars);
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(OrderError::EmptyBlock);
            }
            for &v in block {
                let slot = rank.get_mut(v.index()).ok_or(OrderError::ForeignLetter(v.0))?;
                if *slot != UNSET {
                    return Err(OrderError::Repeated(v.0));
                }
                *slot = by_rank.len() as u16;
                block_of[v.index()] = b as u16;
                by_rank.push(v);
            }
        }
        if by_rank.len() != nvars {
            return Err(OrderError::Incomplete {
                covered: by_rank.len(),
                total: nvars,
            });
        }
        Ok(MonomialOrder {
            blocks,
            rank,
            block_of,
            by_rank,
        })
    }

    pub fn blocks(&self) -> &[Vec<Var>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn num_vars(&self) -> usize {
        self.rank.len()
    }

    /// Block-major position of `v`; larger means bigger in the order.
    pub fn rank(&self, v: Var) -> u16 {
        self.rank[v.index()]
    }

    pub fn var_at_rank(&self, r: u16) -> Var {
        self.by_rank[r as usize]
    }

    pub fn block_of_rank(&self, r: u16) -> u16 {
        self.block_of[self.by_rank[r as usize].index()]
    }

    pub fn block_of(&self, v: Var) -> usize {
        self.block_of[v.index()] as usize
    }

    fn check(&self, w: &Word) -> Result<(), OrderError> {
        match w.letters().iter().find(|v| v.index() >= self.rank.len()) {
            Some(v) => Err(OrderError::ForeignLetter(v.0)),
            None => Ok(()),
        }
    }

    /// Checked comparison rejecting letters outside the order.
    pub fn compare(&self, a: &Word, b: &Word) -> Result<Ordering, OrderError> {
        self.check(a)?;
        self.check(b)?;
        Ok(self.cmp_words(a, b))
    }

    /// Compares two words whose letters are known to belong to the order.
    pub fn cmp_words(&self, a: &Word, b: &Word) -> Ordering {
        let (a, b) = (a.letters(), b.letters());
        if self.blocks.len() > 1 {
            for blk in (0..self.blocks.len() as u16).rev() {
                let da = a.iter().filter(|v| self.block_of[v.index()] == blk).count();
                let db = b.iter().filter(|v| self.block_of[v.index()] == blk).count();
                match da.cmp(&db) {
                    Ordering::Equal => {}
                    other => return other,
                }
            }
        }
        a.len().cmp(&b.len()).then_with(|| {
            a.iter()
                .map(|v| self.rank[v.index()])
                .cmp(b.iter().map(|v| self.rank[v.index()]))
        })
    }

    pub fn leading_term<'p>(&self, p: &'p Polynomial) -> Result<&'p Term, OrderError> {
        for t in p.terms() {
            self.check(&t.word)?;
        }
        p.terms()
            .iter()
            .max_by(|x, y| self.cmp_words(&x.word, &y.word))
            .ok_or(OrderError::ZeroPolynomial)
    }

    /// Human-readable form such as `y < x << z`.
    pub fn describe(&self, algebra: &Algebra) -> String {
        self.blocks
            .iter()
            .map(|b| {
                b.iter()
                    .map(|&v| algebra.name(v))
                    .collect::<Vec<_>>()
                    .join(" < ")
            })
            .collect::<Vec<_>>()
            .join(" << ")
    }
}
