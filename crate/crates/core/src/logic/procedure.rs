use std::collections::{HashMap, HashSet, VecDeque};

use rayon::prelude::*;

use crate::certify::Certificate;
use crate::freealg::{Algebra, Polynomial};
use crate::order::MonomialOrder;

use super::cnf::{cnf, Clause};
use super::formula::OperatorStatement;
use super::herbrand::{herbrand_terms, witness_vars, Instantiation, TermBounds};
use super::idealise::{IdealisationTask, TaskChecker};
use super::LogicError;

/// Resource limits for [`semi_decide`].
#[derive(Clone, Debug)]
pub struct Budget {
    /// Term bounds, used in turn as earlier ones run out of instances.
    pub schedule: Vec<TermBounds>,
    /// `None` keeps going forever, growing the bounds past the schedule.
    pub max_stages: Option<usize>,
    /// Largest number of clause combinations examined when the disjuncts
    /// do not share their hypotheses.
    pub expansion_limit: usize,
    /// Defaults to degree-lexicographic by declaration order.
    pub order: Option<MonomialOrder>,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            schedule: vec![TermBounds::words(1), TermBounds::words(2), TermBounds::words(3)],
            max_stages: Some(200),
            expansion_limit: 64,
            order: None,
        }
    }
}

impl Budget {
    pub fn bounded(schedule: Vec<TermBounds>, max_stages: usize) -> Self {
        Budget {
            schedule,
            max_stages: Some(max_stages),
            ..Self::default()
        }
    }

    pub fn unbounded(schedule: Vec<TermBounds>) -> Self {
        Budget {
            schedule,
            max_stages: None,
            ..Self::default()
        }
    }
}

/// One proved clause of the final disjunction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseProof {
    pub clause: Clause,
    pub generators: Vec<Polynomial>,
    pub candidate: Polynomial,
    /// Expands, against `generators`, to `candidate`.
    pub certificate: Certificate,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Proof {
    pub stage: usize,
    pub witnesses: Vec<Instantiation>,
    pub clauses: Vec<ClauseProof>,
}

impl Proof {
    /// Re-expands every certificate; plain arithmetic only.
    pub fn verify(&self) -> bool {
        self.clauses.iter().all(|c| {
            c.certificate
                .expand(&c.generators)
                .is_ok_and(|p| p == c.candidate)
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Proved(Proof),
    Exhausted { stages: usize },
}

impl Verdict {
    pub fn is_proved(&self) -> bool {
        matches!(self, Verdict::Proved(_))
    }
}

struct Entry {
    checker: TaskChecker,
    /// Set when the basis grew since the last round of checks.
    stale: bool,
}

/// Completion states shared by all tasks with the same generator set.
struct IdealCache {
    order: MonomialOrder,
    entries: Vec<Entry>,
    index: HashMap<Vec<Polynomial>, usize>,
}

impl IdealCache {
    fn entry(&mut self, gens: &[Polynomial]) -> Result<usize, LogicError> {
        let mut key = gens.to_vec();
        key.sort();
        key.dedup();
        if let Some(&i) = self.index.get(&key) {
            return Ok(i);
        }
        let checker = TaskChecker::new(gens.to_vec(), self.order.clone())?;
        self.entries.push(Entry { checker, stale: true });
        self.index.insert(key, self.entries.len() - 1);
        Ok(self.entries.len() - 1)
    }

    /// Brings every ideal up to `total` completion iterations.
    fn advance_to(&mut self, total: usize) {
        self.entries.par_iter_mut().for_each(|e| {
            let ops = total.saturating_sub(e.checker.iterations());
            if e.checker.advance(ops) > 0 {
                e.stale = true;
            }
        });
    }
}

struct ClauseState {
    clause: Clause,
    task: IdealisationTask,
    entry: usize,
    checked: bool,
    proof: Option<(usize, Certificate)>,
}

struct Instance {
    witness: Instantiation,
    clauses: Vec<ClauseState>,
}

/// Instantiations drawn from the bounds schedule, without repeats.
struct Stream<'a> {
    stmt: &'a OperatorStatement,
    algebra: &'a Algebra,
    schedule: VecDeque<TermBounds>,
    grow: bool,
    last: Option<TermBounds>,
    seen: HashSet<Instantiation>,
    buffer: VecDeque<Instantiation>,
}

impl Stream<'_> {
    fn next(&mut self) -> Result<Option<Instantiation>, LogicError> {
        loop {
            if let Some(i) = self.buffer.pop_front() {
                return Ok(Some(i));
            }
            let bounds = match self.schedule.pop_front() {
                Some(b) => b,
                None if self.grow => {
                    let b = self.last.unwrap_or(TermBounds::words(0));
                    TermBounds::new(b.degree + 1, b.summands + 1, b.coeff + 1)
                }
                None => return Ok(None),
            };
            self.last = Some(bounds);
            for inst in herbrand_terms(self.stmt, self.algebra, &bounds)? {
                if self.seen.insert(inst.clone()) {
                    self.buffer.push_back(inst);
                }
            }
        }
    }
}

/// Dovetailed search over Herbrand instances of a closed `∀x ∃y: φ`.
///
/// Stage `n` adds the `n`-th instantiation `φ_n` as a new disjunct, runs
/// every ideal's completion up to `n` iterations in total (so at most `n`
/// further ones for a fresh ideal) and then tests
/// `∀x: φ_1 ∨ … ∨ φ_n`. That disjunction holds as soon as one instance has
/// all of its clauses proved; when the instances differ in their
/// hypotheses, the exact clause-wise expansion is tried as well, up to
/// `budget.expansion_limit` combinations.
pub fn semi_decide(
    stmt: &OperatorStatement,
    algebra: &Algebra,
    budget: &Budget,
) -> Result<Verdict, LogicError> {
    witness_vars(stmt)?;
    let (_, _, matrix) = stmt.formula.prefix();
    let adj = stmt.sorts.adjoint_map(algebra)?;
    let mut cache = IdealCache {
        order: budget
            .order
            .clone()
            .unwrap_or_else(|| MonomialOrder::for_algebra(algebra)),
        entries: Vec::new(),
        index: HashMap::new(),
    };
    let mut stream = Stream {
        stmt,
        algebra,
        schedule: budget.schedule.iter().copied().collect(),
        grow: budget.max_stages.is_none(),
        last: None,
        seen: HashSet::new(),
        buffer: VecDeque::new(),
    };
    let mut instances: Vec<Instance> = Vec::new();
    let mut exhausted_terms = false;
    let mut stage = 0;
    loop {
        if budget.max_stages.is_some_and(|m| stage >= m) {
            return Ok(Verdict::Exhausted { stages: stage });
        }
        stage += 1;
        if !exhausted_terms {
            match stream.next()? {
                Some(witness) => {
                    let body = matrix.substitute(&witness.as_map())?;
                    let mut clauses = Vec::new();
                    for clause in cnf(&body)? {
                        let task = IdealisationTask::from_clause(&clause, algebra, adj.as_ref())?;
                        let entry = cache.entry(&task.generators)?;
                        clauses.push(ClauseState {
                            clause,
                            task,
                            entry,
                            checked: false,
                            proof: None,
                        });
                    }
                    instances.push(Instance { witness, clauses });
                }
                None => exhausted_terms = true,
            }
        }
        if exhausted_terms && cache.entries.iter().all(|e| e.checker.is_saturated()) {
            return Ok(Verdict::Exhausted { stages: stage });
        }
        cache.advance_to(stage);
        for inst in &mut instances {
            for c in &mut inst.clauses {
                if c.proof.is_none() && (cache.entries[c.entry].stale || !c.checked) {
                    c.proof = check(&cache, c.entry, &c.task.candidates);
                    c.checked = true;
                }
            }
        }
        for e in &mut cache.entries {
            e.stale = false;
        }
        if let Some(inst) = instances
            .iter()
            .find(|i| i.clauses.iter().all(|c| c.proof.is_some()))
        {
            return Ok(Verdict::Proved(single_proof(stage, inst, &cache)));
        }
        if let Some(p) = expanded(stage, &instances, &mut cache, budget.expansion_limit)? {
            return Ok(Verdict::Proved(p));
        }
    }
}

fn check(cache: &IdealCache, entry: usize, candidates: &[Polynomial]) -> Option<(usize, Certificate)> {
    if candidates.is_empty() {
        return None;
    }
    cache.entries[entry].checker.try_candidates(candidates)
}

fn proved_clauses(inst: &Instance, cache: &IdealCache) -> Vec<ClauseProof> {
    inst.clauses
        .iter()
        .filter_map(|c| {
            let (i, cert) = c.proof.clone()?;
            Some(ClauseProof {
                clause: c.clause.clone(),
                // Certificate indices refer to the cached ideal's generator order.
                generators: cache.entries[c.entry].checker.ideal().gens().to_vec(),
                candidate: c.task.candidates[i].clone(),
                certificate: cert,
            })
        })
        .collect()
}

fn single_proof(stage: usize, inst: &Instance, cache: &IdealCache) -> Proof {
    Proof {
        stage,
        witnesses: vec![inst.witness.clone()],
        clauses: proved_clauses(inst, cache),
    }
}

/// Exact test of the disjunction through its clause-wise expansion: each
/// combination of one unproved clause per instance must be proved in the
/// ideal of all their hypotheses together.
fn expanded(
    stage: usize,
    instances: &[Instance],
    cache: &mut IdealCache,
    limit: usize,
) -> Result<Option<Proof>, LogicError> {
    if instances.len() < 2 {
        return Ok(None);
    }
    let open: Vec<Vec<&ClauseState>> = instances
        .iter()
        .map(|i| i.clauses.iter().filter(|c| c.proof.is_none()).collect())
        .collect();
    let keys: HashSet<usize> = open.iter().flatten().map(|c| c.entry).collect();
    if keys.len() < 2 {
        // Shared hypotheses: a combination holds iff one of its clauses does.
        return Ok(None);
    }
    let count = open
        .iter()
        .try_fold(1usize, |acc, v| acc.checked_mul(v.len()).filter(|&n| n <= limit));
    let Some(count) = count else {
        return Ok(None);
    };
    let mut proofs: Vec<ClauseProof> = instances.iter().flat_map(|i| proved_clauses(i, cache)).collect();
    proofs.reserve(count);
    let mut pick = vec![0usize; open.len()];
    loop {
        let parts: Vec<&ClauseState> = open.iter().zip(&pick).map(|(v, &k)| v[k]).collect();
        let mut generators: Vec<Polynomial> = Vec::new();
        let mut candidates: Vec<Polynomial> = Vec::new();
        let mut literals = Vec::new();
        for p in &parts {
            for g in &p.task.generators {
                if !generators.contains(g) {
                    generators.push(g.clone());
                }
            }
            candidates.extend(p.task.candidates.iter().cloned());
            literals.extend(p.clause.literals());
        }
        let entry = cache.entry(&generators)?;
        let Some((i, cert)) = check(cache, entry, &candidates) else {
            return Ok(None);
        };
        let clause = cnf(&super::Formula::Or(
            literals
                .into_iter()
                .map(|l| {
                    let eq = super::Formula::Eq(l.lhs, l.rhs);
                    if l.positive {
                        eq
                    } else {
                        !eq
                    }
                })
                .collect(),
        ))?
        .pop()
        .expect("a disjunction of literals is one clause");
        let checker_gens = cache.entries[entry].checker.ideal().gens().to_vec();
        proofs.push(ClauseProof {
            clause,
            generators: checker_gens,
            candidate: candidates[i].clone(),
            certificate: cert,
        });
        let mut pos = 0;
        loop {
            if pos == pick.len() {
                return Ok(Some(Proof {
                    stage,
                    witnesses: instances.iter().map(|i| i.witness.clone()).collect(),
                    clauses: proofs,
                }));
            }
            pick[pos] += 1;
            if pick[pos] < open[pos].len() {
                break;
            }
            pick[pos] = 0;
            pos += 1;
        }
    }
}
