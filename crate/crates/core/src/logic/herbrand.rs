use std::collections::BTreeMap;
use std::fmt;

use crate::freealg::{Algebra, Word};

use super::formula::{OperatorStatement, Shape};
use super::term::{OpTerm, Sort, SortContext};
use super::LogicError;

/// Limits on instantiation terms: word length, number of summands and
/// absolute value of the integer coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TermBounds {
    pub degree: usize,
    pub summands: usize,
    pub coeff: u32,
}

impl TermBounds {
    pub const fn new(degree: usize, summands: usize, coeff: u32) -> Self {
        TermBounds { degree, summands, coeff }
    }

    /// Single words of length at most `degree`, unit coefficients.
    pub const fn words(degree: usize) -> Self {
        Self::new(degree, 1, 1)
    }
}

impl fmt::Display for TermBounds {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.degree, self.summands, self.coeff)
    }
}

/// Terms for the existential variables, in prefix order. Adjoint partners
/// of instantiated variables are included with the adjoint term.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Instantiation(pub Vec<(String, OpTerm)>);

impl Instantiation {
    pub fn as_map(&self) -> BTreeMap<String, OpTerm> {
        self.0.iter().cloned().collect()
    }

    pub fn get(&self, var: &str) -> Option<&OpTerm> {
        self.0.iter().find(|(v, _)| v == var).map(|(_, t)| t)
    }
}

impl fmt::Display for Instantiation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, t)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v} := {t}")?;
        }
        Ok(())
    }
}

/// Existential variables that get their own term, and the partners that
/// follow them by adjunction.
pub(crate) fn witness_vars(stmt: &OperatorStatement) -> Result<(Vec<String>, Vec<String>), LogicError> {
    let shape = stmt.shape();
    if !matches!(shape, Shape::ForallExists | Shape::Existential) {
        return Err(LogicError::WrongShape {
            expected: Shape::ForallExists,
            found: shape,
        });
    }
    let free = stmt.free_vars();
    if !free.is_empty() {
        return Err(LogicError::NotClosed(free.into_iter().collect()));
    }
    let (univ, exist, _) = stmt.formula.prefix();
    let mut own: Vec<String> = Vec::new();
    for e in exist {
        let follows = own.iter().any(|o| stmt.sorts.partner(o) == Some(e.as_str()));
        if !follows && !own.contains(&e) {
            own.push(e);
        }
    }
    Ok((univ, own))
}

/// Letters available to instantiation terms: the universal variables and
/// their adjoint partners, in algebra order.
fn letters(
    stmt: &OperatorStatement,
    univ: &[String],
    algebra: &Algebra,
) -> Result<Vec<(Word, Sort)>, LogicError> {
    let mut names: Vec<&str> = Vec::new();
    for u in univ {
        names.push(u);
        if let Some(p) = stmt.sorts.partner(u) {
            names.push(p);
        }
    }
    let mut out = Vec::new();
    for n in names {
        let v = algebra.var(n)?;
        let s = stmt
            .sorts
            .sort_of(n)
            .ok_or_else(|| LogicError::MissingSort(n.to_string()))?;
        if !out.iter().any(|(w, _): &(Word, Sort)| w.letters() == [v]) {
            out.push((Word::from(v), s));
        }
    }
    out.sort();
    Ok(out)
}

/// All well-sorted words of sort `target`, length 1..=`degree`, ascending
/// in degree-lexicographic order.
fn sorted_words(letters: &[(Word, Sort)], target: &Sort, degree: usize) -> Vec<Word> {
    let mut out = Vec::new();
    // (word, sort of the word so far)
    let mut layer: Vec<(Word, Sort)> = letters.to_vec();
    for _ in 0..degree {
        out.extend(
            layer
                .iter()
                .filter(|(_, s)| s == target)
                .map(|(w, _)| w.clone()),
        );
        let mut next = Vec::new();
        for (w, s) in &layer {
            for (l, ls) in letters {
                if s.domain == ls.codomain {
                    next.push((w.concat(l), Sort::new(ls.domain.clone(), s.codomain.clone())));
                }
            }
        }
        layer = next;
    }
    out.sort();
    out
}

fn word_term(w: &Word, algebra: &Algebra, ctx: &SortContext) -> Result<OpTerm, LogicError> {
    let names: Vec<&str> = w.letters().iter().map(|&v| algebra.name(v)).collect();
    OpTerm::word(ctx, &names)
}

/// Sort key of one linear combination: degree, summands, coefficient size,
/// then word positions, then coefficients (positive before negative).
type ComboKey = (usize, usize, u32, Vec<usize>, Vec<(u32, bool)>);

fn combos(words: &[Word], bounds: &TermBounds) -> Vec<(ComboKey, Vec<(usize, i64)>)> {
    let mut out = Vec::new();
    let coeffs: Vec<i64> = (1..=bounds.coeff as i64).flat_map(|c| [c, -c]).collect();
    let mut subset = Vec::new();
    fn subsets(n: usize, k: usize, start: usize, cur: &mut Vec<usize>, f: &mut dyn FnMut(&[usize])) {
        if !cur.is_empty() {
            f(cur);
        }
        if cur.len() == k {
            return;
        }
        for i in start..n {
            cur.push(i);
            subsets(n, k, i + 1, cur, f);
            cur.pop();
        }
    }
    subsets(words.len(), bounds.summands, 0, &mut subset, &mut |idx| {
        let mut assign = vec![0usize; idx.len()];
        loop {
            let terms: Vec<(usize, i64)> = idx.iter().zip(&assign).map(|(&i, &a)| (i, coeffs[a])).collect();
            let key = (
                idx.iter().map(|&i| words[i].degree()).max().unwrap_or(0),
                idx.len(),
                terms.iter().map(|(_, c)| c.unsigned_abs() as u32).max().unwrap_or(0),
                idx.to_vec(),
                terms.iter().map(|(_, c)| (c.unsigned_abs() as u32, *c < 0)).collect(),
            );
            out.push((key, terms));
            let mut pos = 0;
            loop {
                if pos == assign.len() {
                    return;
                }
                assign[pos] += 1;
                if assign[pos] < coeffs.len() {
                    break;
                }
                assign[pos] = 0;
                pos += 1;
            }
        }
    });
    out.sort_by(|a, b| a.0.cmp(&b.0));
    out
}

/// Candidate terms of one sort, in enumeration order. The zero constant
/// comes right after the unit-coefficient single letters.
fn sort_terms(
    letters: &[(Word, Sort)],
    target: &Sort,
    bounds: &TermBounds,
    algebra: &Algebra,
    ctx: &SortContext,
) -> Result<Vec<OpTerm>, LogicError> {
    let words = sorted_words(letters, target, bounds.degree);
    let mut out = Vec::new();
    let mut zero_placed = false;
    for (key, terms) in combos(&words, bounds) {
        if !zero_placed && (key.0, key.1, key.2) > (1, 1, 1) {
            out.push(OpTerm::zero(target.clone()));
            zero_placed = true;
        }
        let mut acc: Option<OpTerm> = None;
        for (i, c) in terms {
            let w = word_term(&words[i], algebra, ctx)?;
            let t = if c == 1 { w } else { OpTerm::scaled(c, w) };
            acc = Some(match acc {
                None => t,
                Some(a) => OpTerm::sum(a, t)?,
            });
        }
        out.extend(acc);
    }
    if !zero_placed {
        out.push(OpTerm::zero(target.clone()));
    }
    Ok(out)
}

/// Every instantiation of the existential variables by terms within
/// `bounds`. Tuples are ordered by the largest component position, then
/// lexicographically, so the enumeration is fair across variables.
pub fn herbrand_terms(
    stmt: &OperatorStatement,
    algebra: &Algebra,
    bounds: &TermBounds,
) -> Result<Vec<Instantiation>, LogicError> {
    let (univ, own) = witness_vars(stmt)?;
    let letters = letters(stmt, &univ, algebra)?;
    let mut pools = Vec::with_capacity(own.len());
    for e in &own {
        let sort = stmt
            .sorts
            .sort_of(e)
            .ok_or_else(|| LogicError::MissingSort(e.clone()))?;
        pools.push(sort_terms(&letters, &sort, bounds, algebra, &stmt.sorts)?);
    }
    let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
    for pool in &pools {
        tuples = tuples
            .into_iter()
            .flat_map(|t| {
                (0..pool.len()).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect();
    }
    tuples.sort_by_key(|t| (t.iter().copied().max().unwrap_or(0), t.clone()));
    tuples
        .into_iter()
        .map(|t| {
            let mut assign = Vec::new();
            for ((e, pool), &i) in own.iter().zip(&pools).zip(&t) {
                let term = pool[i].clone();
                let partner = stmt.sorts.partner(e).filter(|p| p != e);
                let adj = partner.map(|_| term.adjoint(&stmt.sorts)).transpose()?;
                assign.push((e.clone(), term));
                if let (Some(p), Some(a)) = (partner, adj) {
                    assign.push((p.to_string(), a));
                }
            }
            Ok(Instantiation(assign))
        })
        .collect()
}
