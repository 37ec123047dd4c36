//! Traced normal forms by leading-monomial subword replacement.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use num_traits::Zero;

use super::mono::{IPoly, LinComb, Mono, MonoCtx};
use crate::freealg::Rational;

fn letter_mask(letters: &[u16]) -> u128 {
    letters.iter().fold(0u128, |m, &r| {
        if r < 128 {
            m | (1u128 << r)
        } else {
            u128::MAX
        }
    })
}

/// A monic polynomial prepared for use as a rewriting rule.
#[derive(Clone, Debug)]
pub(crate) struct Reducer {
    pub poly: IPoly,
    pub lm: Vec<u16>,
    mask: u128,
}

impl Reducer {
    pub fn new(ctx: &MonoCtx, poly: IPoly) -> Self {
        let lm = ctx.letters(&poly.0[0].0).to_vec();
        let mask = letter_mask(&lm);
        Reducer { poly, lm, mask }
    }
}

/// First reducer (in list order) whose leading word occurs in `letters`,
/// with its leftmost occurrence.
pub(crate) fn find_reducer(reducers: &[Reducer], letters: &[u16]) -> Option<(usize, usize)> {
    let mask = letter_mask(letters);
    reducers.iter().enumerate().find_map(|(k, r)| {
        if r.lm.len() > letters.len() || r.mask & !mask != 0 {
            return None;
        }
        crate::freealg::word_find(letters, &r.lm).map(|p| (k, p))
    })
}

/// Full reduction of `f`; returns the remainder and the combination
/// `f - remainder` expressed through the reducers.
pub(crate) fn reduce(
    ctx: &MonoCtx,
    reducers: &[Reducer],
    f: &IPoly,
    trace: bool,
) -> (IPoly, LinComb) {
    let mut work: BTreeMap<Mono, Rational> = f.0.iter().cloned().collect();
    let mut rem = Vec::new();
    let mut comb = LinComb::default();
    while let Some((m, c)) = work.pop_last() {
        let letters = ctx.letters(&m);
        let Some((k, p)) = find_reducer(reducers, letters) else {
            rem.push((m, c));
            continue;
        };
        let red = &reducers[k];
        let left = &letters[..p];
        let right = &letters[p + red.lm.len()..];
        for (t, tc) in red.poly.0.iter().skip(1) {
            let delta = &c * tc;
            match work.entry(ctx.sandwich(left, t, right)) {
                Entry::Occupied(mut o) => {
                    *o.get_mut() -= delta;
                    if o.get().is_zero() {
                        o.remove();
                    }
                }
                Entry::Vacant(v) => {
                    v.insert(-delta);
                }
            }
        }
        if trace {
            comb.add((left.to_vec(), k, right.to_vec()), c);
        }
    }
    (IPoly(rem), comb)
}
