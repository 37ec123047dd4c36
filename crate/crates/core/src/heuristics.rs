//! Searches for ideal members of a prescribed shape.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::certify::Certificate;
use crate::freealg::{Polynomial, Rational, Term, Var, Word};
use crate::gb::{GbError, GbOptions, NCIdeal};
use crate::order::{MonomialOrder, OrderError};
use crate::quiver::Quiver;

#[derive(Debug, Error)]
pub enum HeuristicError {
    #[error("heuristic '{0}' requires a prefix")]
    MissingPrefix(Heuristic),
    #[error("heuristic '{0}' requires a suffix")]
    MissingSuffix(Heuristic),
    #[error("unknown heuristic '{0}'")]
    Unknown(String),
    #[error(transparent)]
    Gb(#[from] GbError),
    #[error(transparent)]
    Order(#[from] OrderError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum Heuristic {
    Naive,
    #[default]
    Groebner,
    Subalgebra,
    RightIdeal,
    LeftIdeal,
}

impl fmt::Display for Heuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Heuristic::Naive => "naive",
            Heuristic::Groebner => "groebner",
            Heuristic::Subalgebra => "subalgebra",
            Heuristic::RightIdeal => "right-ideal",
            Heuristic::LeftIdeal => "left-ideal",
        })
    }
}

impl FromStr for Heuristic {
    type Err = HeuristicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "naive" => Heuristic::Naive,
            "groebner" => Heuristic::Groebner,
            "subalgebra" => Heuristic::Subalgebra,
            "right-ideal" => Heuristic::RightIdeal,
            "left-ideal" => Heuristic::LeftIdeal,
            other => return Err(HeuristicError::Unknown(other.to_string())),
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub enum CancelHeuristic {
    #[default]
    Subalgebra,
    OneSided,
    TwoSided,
}

impl fmt::Display for CancelHeuristic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CancelHeuristic::Subalgebra => "subalgebra",
            CancelHeuristic::OneSided => "one-sided",
            CancelHeuristic::TwoSided => "two-sided",
        })
    }
}

impl FromStr for CancelHeuristic {
    type Err = HeuristicError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Ok(match s {
            "subalgebra" => CancelHeuristic::Subalgebra,
            "one-sided" => CancelHeuristic::OneSided,
            "two-sided" => CancelHeuristic::TwoSided,
            other => return Err(HeuristicError::Unknown(other.to_string())),
        })
    }
}

/// Which side of the sought element carries a fixed factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Prefix,
    Suffix,
}

/// Parameters of [`find_equivalent_expression`].
#[derive(Clone, Debug)]
pub struct SearchSpec {
    pub target: Polynomial,
    pub heuristic: Heuristic,
    pub prefix: Option<Term>,
    pub suffix: Option<Term>,
    pub degbound: usize,
    pub order: Option<MonomialOrder>,
    pub gb: GbOptions,
    pub quiver: Option<Quiver>,
}

impl SearchSpec {
    pub fn new(target: Polynomial) -> Self {
        SearchSpec {
            target,
            heuristic: Heuristic::default(),
            prefix: None,
            suffix: None,
            degbound: 5,
            order: None,
            gb: GbOptions::default(),
            quiver: None,
        }
    }

    pub fn heuristic(mut self, h: Heuristic) -> Self {
        self.heuristic = h;
        self
    }

    pub fn prefix(mut self, p: Term) -> Self {
        self.prefix = Some(p);
        self
    }

    pub fn suffix(mut self, s: Term) -> Self {
        self.suffix = Some(s);
        self
    }

    pub fn order(mut self, o: MonomialOrder) -> Self {
        self.order = Some(o);
        self
    }
}

/// An ideal element found by a search, with a certificate for `member`.
///
/// For expression searches `member == poly`; for cancellability `member`
/// is `poly` multiplied by the cancelled factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub poly: Polynomial,
    pub member: Polynomial,
    pub cert: Certificate,
}

/// Options shared by the cancellability searches.
#[derive(Clone, Debug)]
pub struct CancelOptions {
    pub heuristic: CancelHeuristic,
    pub degbound: usize,
    pub gb: GbOptions,
}

impl Default for CancelOptions {
    fn default() -> Self {
        CancelOptions {
            heuristic: CancelHeuristic::default(),
            degbound: 5,
            gb: GbOptions::default(),
        }
    }
}

fn completed(ideal: &NCIdeal, order: Option<&MonomialOrder>, gb: &GbOptions) -> Result<NCIdeal, GbError> {
    let mut id = match order {
        Some(o) => NCIdeal::new(ideal.gens().to_vec(), o.clone())?,
        None => ideal.clone(),
    };
    id.complete(gb);
    Ok(id)
}

/// Certifies `member` against the completed ideal; `None` unless it
/// reduces to zero.
fn certified(id: &NCIdeal, poly: Polynomial, member: Polynomial) -> Option<Finding> {
    let t = id.reduce(&member);
    t.poly.is_zero().then_some(Finding { poly, member, cert: t.cert })
}

/// All words of degree `k` over `n` letters, largest first.
fn words_of_degree(n: usize, k: usize, order: &MonomialOrder) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..k {
        out = out
            .into_iter()
            .flat_map(|w: Vec<Var>| {
                (0..n as u32).map(move |v| {
                    let mut w = w.clone();
                    w.push(Var(v));
                    w
                })
            })
            .collect();
    }
    let mut words: Vec<Word> = out.into_iter().map(Word::new).collect();
    words.sort_by(|a, b| order.cmp_words(b, a));
    words
}

/// Monomials `prefix * h * suffix` of total degree at most `degbound`,
/// by degree and then descending in the order.
fn shaped_monomials(
    n: usize,
    prefix: Option<&Term>,
    suffix: Option<&Term>,
    degbound: usize,
    order: &MonomialOrder,
) -> Vec<Term> {
    let one = Term::one();
    let p = prefix.unwrap_or(&one);
    let s = suffix.unwrap_or(&one);
    let fixed = p.word.degree() + s.word.degree();
    let coeff = &p.coeff * &s.coeff;
    let mut out: Vec<Term> = Vec::new();
    for d in fixed..=degbound {
        let mut layer: Vec<Word> = words_of_degree(n, d - fixed, order)
            .into_iter()
            .map(|h| p.word.concat(&h).concat(&s.word))
            .collect();
        layer.sort_by(|a, b| order.cmp_words(b, a));
        out.extend(layer.into_iter().map(|w| Term::new(coeff.clone(), w)));
    }
    out
}

fn orient(f: &Polynomial, m: &Term, suffix_search: bool) -> Polynomial {
    let m = Polynomial::from_terms([m.clone()]);
    if suffix_search {
        f - &m
    } else {
        &m - f
    }
}

fn quiver_ok(q: Option<&Quiver>, p: &Polynomial) -> bool {
    q.is_none_or(|q| q.is_compatible(p))
}

/// Searches `ideal` for elements of the form `f - g` with `f` the target.
///
/// Every returned element is certified against the ideal's generators.
pub fn find_equivalent_expression(
    ideal: &NCIdeal,
    spec: &SearchSpec,
) -> Result<Vec<Finding>, HeuristicError> {
    ideal.check_poly(&spec.target)?;
    match spec.heuristic {
        Heuristic::RightIdeal if spec.prefix.is_none() => {
            return Err(HeuristicError::MissingPrefix(spec.heuristic))
        }
        Heuristic::LeftIdeal if spec.suffix.is_none() => {
            return Err(HeuristicError::MissingSuffix(spec.heuristic))
        }
        _ => {}
    }
    if spec.target.is_zero() {
        return Ok(Vec::new());
    }
    let id = completed(ideal, spec.order.as_ref(), &spec.gb)?;
    let found = match spec.heuristic {
        Heuristic::Naive => enumerate(&id, spec, true),
        Heuristic::RightIdeal | Heuristic::LeftIdeal => enumerate(&id, spec, false),
        Heuristic::Groebner => scan_basis(&id, spec),
        Heuristic::Subalgebra => subalgebra(&id, spec)?,
    };
    Ok(found)
}

fn enumerate(id: &NCIdeal, spec: &SearchSpec, first_only: bool) -> Vec<Finding> {
    let f = &spec.target;
    let n = id.order().num_vars();
    let suffix_search = spec.suffix.is_some() && spec.prefix.is_none();
    let mut out = Vec::new();
    for m in shaped_monomials(n, spec.prefix.as_ref(), spec.suffix.as_ref(), spec.degbound, id.order()) {
        let cand = orient(f, &m, suffix_search);
        if cand.is_zero() || !quiver_ok(spec.quiver.as_ref(), &cand) {
            continue;
        }
        if !id.normal_form(&cand).is_zero() {
            continue;
        }
        if let Some(hit) = certified(id, cand.clone(), cand) {
            out.push(hit);
            if first_only {
                break;
            }
        }
    }
    out
}

/// The factor `lambda` with `e = lambda * f + rest` and `rest` free of
/// `f`'s words, if any.
fn proportional_part(e: &Polynomial, f: &Polynomial) -> Option<Rational> {
    let first = f.terms().first()?;
    let lambda = e.coeff_of(&first.word) / &first.coeff;
    if lambda.is_zero() {
        return None;
    }
    f.terms()
        .iter()
        .all(|t| e.coeff_of(&t.word) == &lambda * &t.coeff)
        .then_some(lambda)
}

fn shape_ok(g: &Polynomial, spec: &SearchSpec) -> bool {
    g.terms().iter().all(|t| {
        spec.prefix.as_ref().is_none_or(|p| t.word.starts_with(&p.word))
            && spec.suffix.as_ref().is_none_or(|s| t.word.ends_with(&s.word))
    })
}

fn scan_basis(id: &NCIdeal, spec: &SearchSpec) -> Vec<Finding> {
    let f = &spec.target;
    let mut out: Vec<Finding> = id
        .traced_basis()
        .into_iter()
        .filter(|e| {
            let Some(lambda) = proportional_part(&e.poly, f) else {
                return false;
            };
            let g = &e.poly - &f.scale(&lambda);
            !g.is_zero() && shape_ok(&g, spec) && quiver_ok(spec.quiver.as_ref(), &e.poly)
        })
        .map(|e| Finding {
            member: e.poly.clone(),
            poly: e.poly,
            cert: e.cert,
        })
        .collect();
    let order = id.order();
    out.sort_by(|a, b| {
        let la = &order.leading_term(&a.poly).expect("nonzero").word;
        let lb = &order.leading_term(&b.poly).expect("nonzero").word;
        order.cmp_words(la, lb)
    });
    out
}

/// Replaces every occurrence of `tag` by `value`.
fn substitute(p: &Polynomial, tag: Var, value: &Polynomial) -> Polynomial {
    p.terms()
        .iter()
        .map(|t| {
            let mut acc = Polynomial::constant(t.coeff.clone());
            let mut run: Vec<Var> = Vec::new();
            for &v in t.word.letters() {
                if v == tag {
                    acc = &acc * &Polynomial::from_word(Word::new(std::mem::take(&mut run)));
                    acc = &acc * value;
                } else {
                    run.push(v);
                }
            }
            &acc * &Polynomial::from_word(Word::new(run))
        })
        .sum()
}

/// `order` extended by `tag` as a block below all letters.
fn with_tag(order: &MonomialOrder, tag: Var) -> Result<MonomialOrder, OrderError> {
    let mut blocks = order.blocks().to_vec();
    blocks.insert(0, vec![tag]);
    MonomialOrder::from_blocks(blocks, order.num_vars() + 1)
}

/// Elimination order with the target's letters in a top block, keeping
/// the relative order of both parts.
fn elimination_order(id: &NCIdeal, f: &Polynomial) -> Result<MonomialOrder, OrderError> {
    let order = id.order();
    let top = f.vars();
    let mut low: Vec<Var> = Vec::new();
    let mut high: Vec<Var> = Vec::new();
    for r in 0..order.num_vars() as u16 {
        let v = order.var_at_rank(r);
        if top.contains(&v) {
            high.push(v);
        } else {
            low.push(v);
        }
    }
    let blocks = if low.is_empty() { vec![high] } else { vec![low, high] };
    MonomialOrder::from_blocks(blocks, order.num_vars())
}

/// Basis elements `lambda * (f - g)` with `g` free of the target's letters
/// under an order eliminating those letters.
fn subalgebra(id: &NCIdeal, spec: &SearchSpec) -> Result<Vec<Finding>, HeuristicError> {
    let order = match &spec.order {
        Some(o) => o.clone(),
        None => elimination_order(id, &spec.target)?,
    };
    let elim = completed(id, Some(&order), &spec.gb)?;
    let top = spec.target.vars();
    let mut out: Vec<Finding> = scan_basis(&elim, spec)
        .into_iter()
        .filter(|hit| {
            let lambda = proportional_part(&hit.poly, &spec.target).expect("scanned");
            let g = &hit.poly - &spec.target.scale(&lambda);
            g.terms().iter().all(|t| top.iter().all(|&v| !t.word.contains_var(v)))
        })
        .collect();
    out.dedup_by(|a, b| a.poly == b.poly);
    Ok(out)
}

/// Thin wrapper: factorisations `f = through * h` or `f = h * through`.
pub fn find_range_factorisation(
    ideal: &NCIdeal,
    f: &Polynomial,
    through: &Term,
    side: Side,
    heuristic: Heuristic,
) -> Result<Vec<Finding>, HeuristicError> {
    let spec = SearchSpec::new(f.clone()).heuristic(heuristic);
    let spec = match side {
        Side::Prefix => spec.prefix(through.clone()),
        Side::Suffix => spec.suffix(through.clone()),
    };
    find_equivalent_expression(ideal, &spec)
}

/// Elements `g = b*f` with `a*g` in the ideal.
pub fn apply_left_cancellability(
    ideal: &NCIdeal,
    a: &Term,
    b: &Term,
    opts: &CancelOptions,
) -> Result<Vec<Finding>, HeuristicError> {
    cancel(ideal, a, b, Side::Prefix, opts)
}

/// Elements `g = f*a` with `g*b` in the ideal.
pub fn apply_right_cancellability(
    ideal: &NCIdeal,
    a: &Term,
    b: &Term,
    opts: &CancelOptions,
) -> Result<Vec<Finding>, HeuristicError> {
    cancel(ideal, a, b, Side::Suffix, opts)
}

/// Cancellability search. With `Side::Prefix` the outer factor is `a` and
/// the kept one `b` (`a*b*f`); with `Side::Suffix` they are `b` and `a`
/// (`f*a*b`).
fn cancel(
    ideal: &NCIdeal,
    a: &Term,
    b: &Term,
    side: Side,
    opts: &CancelOptions,
) -> Result<Vec<Finding>, HeuristicError> {
    for w in [&a.word, &b.word] {
        ideal.check_poly(&Polynomial::from_word(w.clone()))?;
    }
    if a.coeff.is_zero() || b.coeff.is_zero() {
        return Ok(Vec::new());
    }
    let id = completed(ideal, None, &opts.gb)?;
    let (outer, kept) = match side {
        Side::Prefix => (a, b),
        Side::Suffix => (b, a),
    };
    let member = |g: &Polynomial| match side {
        Side::Prefix => g.sandwich(outer, &Term::one()),
        Side::Suffix => g.sandwich(&Term::one(), outer),
    };
    let cands = match opts.heuristic {
        CancelHeuristic::Subalgebra => tagged_cancel(&id, outer, kept, side, &opts.gb)?,
        CancelHeuristic::TwoSided => word_cancel(&id, outer, kept, side, opts.degbound),
        CancelHeuristic::OneSided => kernel_cancel(&id, outer, kept, side, opts.degbound),
    };
    let mut out: Vec<Finding> = Vec::new();
    for g in cands {
        if g.is_zero() || out.iter().any(|x| x.poly == g) {
            continue;
        }
        let m = member(&g);
        if let Some(hit) = certified(&id, g, m) {
            out.push(hit);
        }
    }
    Ok(out)
}

/// Adds `t - outer*kept` (or `kept*outer`) with `t` below every letter and
/// collects basis elements all of whose words start (end) with `t`.
fn tagged_cancel(
    id: &NCIdeal,
    outer: &Term,
    kept: &Term,
    side: Side,
    gb: &GbOptions,
) -> Result<Vec<Polynomial>, HeuristicError> {
    let tag = Var(id.order().num_vars() as u32);
    let prod = match side {
        Side::Prefix => Polynomial::from_terms([outer.clone()]) * Polynomial::from_terms([kept.clone()]),
        Side::Suffix => Polynomial::from_terms([kept.clone()]) * Polynomial::from_terms([outer.clone()]),
    };
    let t = Polynomial::from_word(Word::new(vec![tag]));
    let mut gens = id.gens().to_vec();
    gens.push(&t - &prod);
    let mut tagged = NCIdeal::new(gens, with_tag(id.order(), tag)?)?;
    tagged.complete(gb);
    let at_edge = |w: &Word| match side {
        Side::Prefix => w.letters().first() == Some(&tag),
        Side::Suffix => w.letters().last() == Some(&tag),
    };
    Ok(tagged
        .basis_polys()
        .into_iter()
        .filter(|e| e.terms().iter().all(|x| at_edge(&x.word)))
        .map(|e| strip(&substitute(&e, tag, &prod), outer, side))
        .collect())
}

/// Divides every term by `outer` on the given side; the caller guarantees
/// divisibility.
fn strip(p: &Polynomial, outer: &Term, side: Side) -> Polynomial {
    let k = outer.word.degree();
    let inv = Rational::one() / &outer.coeff;
    Polynomial::from_terms(p.terms().iter().map(|t| {
        let n = t.word.degree();
        let w = match side {
            Side::Prefix => t.word.slice(k, n),
            Side::Suffix => t.word.slice(0, n - k),
        };
        Term::new(&t.coeff * &inv, w)
    }))
}

/// Elements `kept*h - kept` (or `h*kept - kept`) over words `h`.
fn word_cancel(id: &NCIdeal, outer: &Term, kept: &Term, side: Side, degbound: usize) -> Vec<Polynomial> {
    let n = id.order().num_vars();
    let kp = Polynomial::from_terms([kept.clone()]);
    let (prefix, suffix) = match side {
        Side::Prefix => (Some(kept), None),
        Side::Suffix => (None, Some(kept)),
    };
    shaped_monomials(n, prefix, suffix, degbound, id.order())
        .into_iter()
        .filter(|m| m.word != kept.word)
        .map(|m| &Polynomial::from_terms([m]) - &kp)
        .filter(|g| {
            let prod = match side {
                Side::Prefix => g.sandwich(outer, &Term::one()),
                Side::Suffix => g.sandwich(&Term::one(), outer),
            };
            id.normal_form(&prod).is_zero()
        })
        .collect()
}

/// Linear dependencies among the normal forms of `outer*kept*w` over words
/// `w`, by increasing `w`; each dependency `sum c_w w` yields
/// `kept * sum c_w w`.
fn kernel_cancel(id: &NCIdeal, outer: &Term, kept: &Term, side: Side, degbound: usize) -> Vec<Polynomial> {
    let n = id.order().num_vars();
    let order = id.order();
    let fixed = outer.word.degree() + kept.word.degree();
    let mut words: Vec<Word> = Vec::new();
    for d in 0..=degbound.saturating_sub(fixed) {
        let mut layer = words_of_degree(n, d, order);
        layer.reverse();
        words.extend(layer);
    }
    // pivot leading word -> (normal form, combination over word indices)
    let mut pivots: BTreeMap<Word, (Polynomial, BTreeMap<usize, Rational>)> = BTreeMap::new();
    let mut out = Vec::new();
    for (k, w) in words.iter().enumerate() {
        let full = match side {
            Side::Prefix => outer.word.concat(&kept.word).concat(w),
            Side::Suffix => w.concat(&kept.word).concat(&outer.word),
        };
        let mut nf = id.normal_form(&Polynomial::from_word(full));
        let mut comb: BTreeMap<usize, Rational> = BTreeMap::from([(k, Rational::one())]);
        while let Ok(lt) = order.leading_term(&nf) {
            let Some((pnf, pcomb)) = pivots.get(&lt.word) else { break };
            let c = lt.coeff.clone() / pnf.coeff_of(&lt.word);
            nf = &nf - &pnf.scale(&c);
            for (i, x) in pcomb {
                let e = comb.entry(*i).or_insert_with(Rational::zero);
                *e -= &c * x;
            }
            comb.retain(|_, x| !x.is_zero());
        }
        if nf.is_zero() {
            let h: Polynomial = comb
                .iter()
                .map(|(i, c)| Polynomial::from_terms([Term::new(c.clone(), words[*i].clone())]))
                .sum();
            out.push(match side {
                Side::Prefix => h.sandwich(kept, &Term::one()),
                Side::Suffix => h.sandwich(&Term::one(), kept),
            });
        } else {
            let lw = order.leading_term(&nf).expect("nonzero").word.clone();
            pivots.insert(lw, (nf, comb));
        }
    }
    out
}
