use std::cmp::Reverse;
use std::collections::HashMap;

use num_traits::{One, Zero};
use rayon::prelude::*;
use thiserror::Error;

use super::mono::{IPoly, LinComb, MonoCtx};
use super::reduce::{reduce, Reducer};
use crate::certify::{Certificate, Cofactor};
use crate::freealg::{word_find, Polynomial, Rational, Term};
use crate::order::{MonomialOrder, OrderError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GbError {
    #[error(transparent)]
    Order(#[from] OrderError),
}

/// Knobs of the completion procedure.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GbOptions {
    pub maxiter: usize,
    pub maxdeg: Option<usize>,
    pub trace_cofactors: bool,
    pub criterion: bool,
    pub reset: bool,
}

impl Default for GbOptions {
    fn default() -> Self {
        GbOptions {
            maxiter: 10,
            maxdeg: None,
            trace_cofactors: true,
            criterion: true,
            reset: true,
        }
    }
}

/// A polynomial together with a cofactor representation in the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TracedPolynomial {
    pub poly: Polynomial,
    pub cert: Certificate,
}

#[derive(Clone, Debug)]
enum Origin {
    Generator { index: usize, scale: Rational },
    Derived(LinComb),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum AmbiguityKind {
    Overlap,
    Inclusion,
}

/// `l1·lm(g_i)·r1 = l2·lm(g_j)·r2`.
#[derive(Clone, Debug)]
struct Ambiguity {
    kind: AmbiguityKind,
    i: usize,
    j: usize,
    l1: Vec<u16>,
    r1: Vec<u16>,
    l2: Vec<u16>,
    r2: Vec<u16>,
    degree: usize,
}

/// Two-sided ideal of the free algebra with a resumable completion state.
#[derive(Clone, Debug)]
pub struct NCIdeal {
    gens: Vec<Polynomial>,
    order: MonomialOrder,
    ctx: MonoCtx,
    reducers: Vec<Reducer>,
    origins: Vec<Origin>,
    pending: Vec<Ambiguity>,
    iterations: usize,
    trace: bool,
}

impl NCIdeal {
    pub fn new(gens: Vec<Polynomial>, order: MonomialOrder) -> Result<Self, GbError> {
        let ctx = MonoCtx::new(&order);
        let mut ideal = NCIdeal {
            gens,
            order,
            ctx,
            reducers: Vec::new(),
            origins: Vec::new(),
            pending: Vec::new(),
            iterations: 0,
            trace: true,
        };
        for g in &ideal.gens {
            ideal.check_poly(g)?;
        }
        ideal.reset(true);
        Ok(ideal)
    }

    pub fn with_deglex(gens: Vec<Polynomial>, nvars: usize) -> Result<Self, GbError> {
        Self::new(gens, MonomialOrder::deglex(nvars))
    }

    pub fn gens(&self) -> &[Polynomial] {
        &self.gens
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    /// Completion iterations run since the last reset.
    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// True once no ambiguity is left, i.e. the basis is a Gröbner basis
    /// (up to any degree bound used).
    pub fn is_complete(&self) -> bool {
        self.pending.is_empty()
    }

    pub fn check_poly(&self, p: &Polynomial) -> Result<(), GbError> {
        for t in p.terms() {
            if let Some(v) = t.word.letters().iter().find(|v| v.index() >= self.order.num_vars()) {
                return Err(OrderError::ForeignLetter(v.0).into());
            }
        }
        Ok(())
    }

    fn reset(&mut self, trace: bool) {
        self.trace = trace;
        self.reducers.clear();
        self.origins.clear();
        self.pending.clear();
        self.iterations = 0;
        for (index, g) in self.gens.iter().enumerate() {
            if g.is_zero() {
                continue;
            }
            let mut p = self.ctx.encode_poly(&self.order, g);
            let scale = p.make_monic();
            self.reducers.push(Reducer::new(&self.ctx, p));
            self.origins.push(Origin::Generator { index, scale });
        }
        self.add_ambiguities(0);
    }

    fn add_ambiguities(&mut self, start: usize) {
        let n = self.reducers.len();
        for i in 0..n {
            for j in 0..n {
                if i >= start || j >= start {
                    self.ambiguities_between(i, j);
                }
            }
        }
    }

    fn ambiguities_between(&mut self, i: usize, j: usize) {
        let u = &self.reducers[i].lm;
        let v = &self.reducers[j].lm;
        for b in 1..u.len().min(v.len()) {
            if u[u.len() - b..] == v[..b] {
                self.pending.push(Ambiguity {
                    kind: AmbiguityKind::Overlap,
                    i,
                    j,
                    l1: Vec::new(),
                    r1: v[b..].to_vec(),
                    l2: u[..u.len() - b].to_vec(),
                    r2: Vec::new(),
                    degree: u.len() + v.len() - b,
                });
            }
        }
        if i == j || v.len() > u.len() || (v.len() == u.len() && j > i) {
            return;
        }
        let mut from = 0;
        while from + v.len() <= u.len() {
            let Some(off) = word_find(&u[from..], v) else { break };
            let p = from + off;
            self.pending.push(Ambiguity {
                kind: AmbiguityKind::Inclusion,
                i,
                j,
                l1: Vec::new(),
                r1: Vec::new(),
                l2: u[..p].to_vec(),
                r2: u[p + v.len()..].to_vec(),
                degree: u.len(),
            });
            from = p + 1;
        }
    }

    /// An overlap is redundant when some leading word sits strictly inside
    /// its common multiple: it then resolves through two shorter ambiguities.
    fn redundant(&self, a: &Ambiguity) -> bool {
        if a.kind == AmbiguityKind::Inclusion {
            return false;
        }
        let mut w = a.l1.clone();
        w.extend_from_slice(&self.reducers[a.i].lm);
        w.extend_from_slice(&a.r1);
        let len = w.len();
        self.reducers.iter().any(|r| {
            let m = r.lm.len();
            len >= m + 2 && (1..len - m).any(|s| w[s..s + m] == r.lm[..])
        })
    }

    fn s_polynomial(&self, a: &Ambiguity) -> (IPoly, LinComb) {
        let side = |idx: usize, l: &[u16], r: &[u16]| {
            IPoly(
                self.reducers[idx]
                    .poly
                    .0
                    .iter()
                    .map(|(m, c)| (self.ctx.sandwich(l, m, r), c.clone()))
                    .collect(),
            )
        };
        let mut s = side(a.i, &a.l1, &a.r1);
        s.sub_scaled(&Rational::one(), &side(a.j, &a.l2, &a.r2));
        let mut cert = LinComb::default();
        if self.trace {
            cert.add((a.l1.clone(), a.i, a.r1.clone()), Rational::one());
            cert.add((a.l2.clone(), a.j, a.r2.clone()), -Rational::one());
            cert.prune();
        }
        (s, cert)
    }

    /// Runs one completion iteration: all pending ambiguities of minimal
    /// degree. Returns false when nothing was left to process.
    pub fn step(&mut self, maxdeg: Option<usize>, criterion: bool) -> bool {
        let batch = loop {
            let Some(d) = self
                .pending
                .iter()
                .map(|a| a.degree)
                .filter(|&d| maxdeg.is_none_or(|m| d <= m))
                .min()
            else {
                return false;
            };
            let (batch, rest): (Vec<_>, Vec<_>) =
                std::mem::take(&mut self.pending).into_iter().partition(|a| a.degree == d);
            self.pending = rest;
            let batch: Vec<Ambiguity> = if criterion {
                batch.into_iter().filter(|a| !self.redundant(a)).collect()
            } else {
                batch
            };
            if !batch.is_empty() {
                break batch;
            }
        };
        self.process(batch);
        self.iterations += 1;
        true
    }

    fn process(&mut self, mut batch: Vec<Ambiguity>) {
        let trace = self.trace;
        // Rows touching the newest elements go first; the pivot choice in
        // the echelon step below depends on this order.
        batch.sort_by_key(|a| Reverse((a.i.max(a.j), a.i.min(a.j))));
        let rows: Vec<(IPoly, LinComb)> = batch
            .par_iter()
            .map(|a| {
                let (s, mut cert) = self.s_polynomial(a);
                let (rem, red) = reduce(&self.ctx, &self.reducers, &s, trace);
                if trace {
                    cert.add_sandwich(&-Rational::one(), &[], &red, &[]);
                    cert.prune();
                }
                (rem, cert)
            })
            .collect();

        // Mutual reduction of the batch into reduced echelon form.
        let mut pivots: Vec<(IPoly, LinComb)> = Vec::new();
        for (mut p, mut cert) in rows {
            for (q, qcert) in &pivots {
                let lead = &q.0[0].0;
                if let Some((_, c)) = p.0.iter().find(|(m, _)| m == lead) {
                    let c = c.clone();
                    p.sub_scaled(&c, q);
                    if trace {
                        cert.add_sandwich(&-c, &[], qcert, &[]);
                    }
                }
            }
            if p.is_zero() {
                continue;
            }
            let inv = p.make_monic();
            if trace {
                cert.scale(&inv);
                cert.prune();
            }
            let lead = p.0[0].0.clone();
            for (q, qcert) in &mut pivots {
                if let Some((_, c)) = q.0.iter().find(|(m, _)| *m == lead) {
                    let c = c.clone();
                    q.sub_scaled(&c, &p);
                    if trace {
                        qcert.add_sandwich(&-c, &[], &cert, &[]);
                        qcert.prune();
                    }
                }
            }
            pivots.push((p, cert));
        }
        pivots.sort_by(|a, b| a.0 .0[0].0.cmp(&b.0 .0[0].0));

        let start = self.reducers.len();
        for (p, cert) in pivots {
            self.reducers.push(Reducer::new(&self.ctx, p));
            self.origins.push(Origin::Derived(cert));
        }
        self.add_ambiguities(start);
    }

    fn fill_memo(&self, k: usize, memo: &mut HashMap<usize, LinComb>) {
        if memo.contains_key(&k) {
            return;
        }
        let comb = match &self.origins[k] {
            Origin::Generator { index, scale } => {
                LinComb::single(Vec::new(), *index, Vec::new(), scale.clone())
            }
            Origin::Derived(lc) => {
                for (_, e, _) in lc.0.keys() {
                    self.fill_memo(*e, memo);
                }
                let mut out = LinComb::default();
                for ((l, e, r), c) in &lc.0 {
                    out.add_sandwich(c, l, &memo[e], r);
                }
                out.prune();
                out
            }
        };
        memo.insert(k, comb);
    }

    /// Rewrites a combination of basis elements in terms of the generators.
    fn to_certificate(&self, lc: &LinComb, memo: &mut HashMap<usize, LinComb>) -> Certificate {
        for (_, e, _) in lc.0.keys() {
            self.fill_memo(*e, memo);
        }
        let mut out = LinComb::default();
        for ((l, e, r), c) in &lc.0 {
            out.add_sandwich(c, l, &memo[e], r);
        }
        out.prune();
        Certificate::new(
            out.0
                .into_iter()
                .map(|((l, g, r), c)| {
                    Cofactor::new(
                        Term::new(c, MonoCtx::decode_letters(&self.order, &l)),
                        g,
                        Term::monomial(MonoCtx::decode_letters(&self.order, &r)),
                    )
                })
                .collect(),
        )
    }

    /// Current (partial) basis, monic, without certificates.
    pub fn basis_polys(&self) -> Vec<Polynomial> {
        self.reducers
            .iter()
            .map(|r| self.ctx.decode_poly(&self.order, &r.poly))
            .collect()
    }

    pub fn basis_len(&self) -> usize {
        self.reducers.len()
    }

    /// Current basis with certificates (empty when tracing is off).
    pub fn traced_basis(&self) -> Vec<TracedPolynomial> {
        let mut memo = HashMap::new();
        (0..self.reducers.len())
            .map(|k| {
                let cert = if self.trace {
                    let lc = LinComb::single(Vec::new(), k, Vec::new(), Rational::one());
                    self.to_certificate(&lc, &mut memo)
                } else {
                    Certificate::default()
                };
                TracedPolynomial {
                    poly: self.ctx.decode_poly(&self.order, &self.reducers[k].poly),
                    cert,
                }
            })
            .collect()
    }

    /// Runs up to `opts.maxiter` iterations, resetting first if asked.
    pub fn complete(&mut self, opts: &GbOptions) {
        if opts.reset || (opts.trace_cofactors && !self.trace) {
            self.reset(opts.trace_cofactors);
        }
        for _ in 0..opts.maxiter {
            if !self.step(opts.maxdeg, opts.criterion) {
                break;
            }
        }
    }

    pub fn groebner_basis(&mut self, opts: &GbOptions) -> Vec<TracedPolynomial> {
        self.complete(opts);
        self.traced_basis()
    }

    /// Normal form against the current basis; the certificate expands to
    /// `f - remainder`.
    pub fn reduce(&self, f: &Polynomial) -> TracedPolynomial {
        let p = self.ctx.encode_poly(&self.order, f);
        if let Some((k, c)) = self.basis_multiple(&p) {
            let cert = if self.trace {
                let lc = LinComb::single(Vec::new(), k, Vec::new(), c);
                self.to_certificate(&lc, &mut HashMap::new())
            } else {
                Certificate::default()
            };
            return TracedPolynomial { poly: Polynomial::zero(), cert };
        }
        let (rem, lc) = reduce(&self.ctx, &self.reducers, &p, self.trace);
        let cert = if self.trace {
            self.to_certificate(&lc, &mut HashMap::new())
        } else {
            Certificate::default()
        };
        TracedPolynomial {
            poly: self.ctx.decode_poly(&self.order, &rem),
            cert,
        }
    }

    /// Normal form without certificate bookkeeping.
    pub fn normal_form(&self, f: &Polynomial) -> Polynomial {
        let p = self.ctx.encode_poly(&self.order, f);
        if self.basis_multiple(&p).is_some() {
            return Polynomial::zero();
        }
        let (rem, _) = reduce(&self.ctx, &self.reducers, &p, false);
        self.ctx.decode_poly(&self.order, &rem)
    }

    // A partial basis need not reduce its own members to zero when an
    // earlier rule rewrites the leading word first.
    fn basis_multiple(&self, p: &IPoly) -> Option<(usize, Rational)> {
        let (m, c) = p.0.first()?;
        self.reducers.iter().position(|r| {
            r.poly.0.len() == p.0.len()
                && r.poly.0[0].0 == *m
                && r.poly.0.iter().zip(&p.0).all(|((a, x), (b, y))| a == b && &(x * c) == y)
        })
        .map(|k| (k, c.clone()))
    }

    pub fn reduced_form(&mut self, f: &Polynomial, opts: &GbOptions) -> TracedPolynomial {
        self.complete(opts);
        self.reduce(f)
    }

    /// Leading word of `p` under this ideal's order.
    pub fn leading_term<'p>(&self, p: &'p Polynomial) -> Option<&'p Term> {
        self.order.leading_term(p).ok()
    }
}

/// Mutually reduces a set of traced polynomials until no element's
/// monomial is divisible by another element's leading word.
pub fn interreduce(g: &[TracedPolynomial], order: &MonomialOrder) -> Vec<TracedPolynomial> {
    let ctx = MonoCtx::new(order);
    let mut items: Vec<Option<(IPoly, Certificate)>> = g
        .iter()
        .filter(|t| !t.poly.is_zero())
        .map(|t| {
            let mut p = ctx.encode_poly(order, &t.poly);
            let inv = p.make_monic();
            (p, scale_cert(&t.cert, &inv))
        })
        .map(Some)
        .collect();
    loop {
        let mut changed = false;
        for idx in 0..items.len() {
            let Some((p, cert)) = items[idx].clone() else { continue };
            let owners: Vec<usize> = (0..items.len())
                .filter(|&k| k != idx && items[k].is_some())
                .collect();
            let reducers: Vec<Reducer> = owners
                .iter()
                .map(|&k| Reducer::new(&ctx, items[k].as_ref().unwrap().0.clone()))
                .collect();
            let (mut rem, lc) = reduce(&ctx, &reducers, &p, true);
            if lc.0.is_empty() {
                continue;
            }
            changed = true;
            let mut triples = cert.triples().to_vec();
            for ((l, k, r), c) in &lc.0 {
                let lw = MonoCtx::decode_letters(order, l);
                let rw = MonoCtx::decode_letters(order, r);
                let other = &items[owners[*k]].as_ref().unwrap().1;
                for t in other.triples() {
                    triples.push(Cofactor::new(
                        Term::new(-(c * &t.left.coeff * &t.right.coeff), lw.concat(&t.left.word)),
                        t.gen,
                        Term::monomial(t.right.word.concat(&rw)),
                    ));
                }
            }
            let cert = Certificate::new(triples).normalized();
            items[idx] = if rem.is_zero() {
                None
            } else {
                let inv = rem.make_monic();
                Some((rem, scale_cert(&cert, &inv)))
            };
        }
        if !changed {
            break;
        }
    }
    items
        .into_iter()
        .flatten()
        .map(|(p, cert)| TracedPolynomial {
            poly: ctx.decode_poly(order, &p),
            cert,
        })
        .collect()
}

fn scale_cert(cert: &Certificate, c: &Rational) -> Certificate {
    if c.is_one() {
        return cert.clone();
    }
    Certificate::new(
        cert.triples()
            .iter()
            .filter(|_| !c.is_zero())
            .map(|t| Cofactor::new(t.left.scaled(c), t.gen, t.right.clone()))
            .collect(),
    )
}
