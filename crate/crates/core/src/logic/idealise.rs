use crate::certify::Certificate;
use crate::freealg::{AdjointMap, Algebra, Polynomial};
use crate::gb::NCIdeal;
use crate::order::MonomialOrder;

use super::cnf::{cnf, Clause};
use super::formula::{OperatorStatement, Shape};
use super::LogicError;

/// Ideal membership form of one clause: the clause holds iff some candidate
/// lies in the ideal generated by `generators`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IdealisationTask {
    pub generators: Vec<Polynomial>,
    pub candidates: Vec<Polynomial>,
}

impl IdealisationTask {
    /// With an adjoint pairing, the hypotheses are closed under taking
    /// adjoints wherever every letter has a partner.
    pub fn from_clause(
        clause: &Clause,
        algebra: &Algebra,
        adjoints: Option<&AdjointMap>,
    ) -> Result<Self, LogicError> {
        let diff = |(s, t): &(super::OpTerm, super::OpTerm)| -> Result<Polynomial, LogicError> {
            Ok(s.to_polynomial(algebra)? - t.to_polynomial(algebra)?)
        };
        let mut generators = Vec::new();
        for d in &clause.disequalities {
            let g = diff(d)?;
            if !g.is_zero() && !generators.contains(&g) {
                generators.push(g);
            }
        }
        if let Some(adj) = adjoints {
            let n = generators.len();
            for i in 0..n {
                let Ok(g) = adj.adjoint(&generators[i]) else { continue };
                if !generators.iter().any(|h| g.scalar_ratio(h).is_some()) {
                    generators.push(g);
                }
            }
        }
        let candidates = clause.equalities.iter().map(diff).collect::<Result<_, _>>()?;
        Ok(IdealisationTask { generators, candidates })
    }
}

/// One task per clause of the matrix of a closed universal statement.
pub fn idealise(stmt: &OperatorStatement, algebra: &Algebra) -> Result<Vec<IdealisationTask>, LogicError> {
    let shape = stmt.shape();
    if shape != Shape::Universal {
        return Err(LogicError::WrongShape { expected: Shape::Universal, found: shape });
    }
    let free = stmt.free_vars();
    if !free.is_empty() {
        return Err(LogicError::NotClosed(free.into_iter().collect()));
    }
    let (_, _, matrix) = stmt.formula.prefix();
    let adj = stmt.sorts.adjoint_map(algebra)?;
    cnf(matrix)?
        .iter()
        .map(|c| IdealisationTask::from_clause(c, algebra, adj.as_ref()))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TaskOutcome {
    Proved { candidate: usize, certificate: Certificate },
    Unknown,
}

impl TaskOutcome {
    pub fn is_proved(&self) -> bool {
        matches!(self, TaskOutcome::Proved { .. })
    }
}

/// Resumable membership check for the candidates of a task.
#[derive(Clone, Debug)]
pub struct TaskChecker {
    ideal: NCIdeal,
}

impl TaskChecker {
    pub fn new(generators: Vec<Polynomial>, order: MonomialOrder) -> Result<Self, LogicError> {
        Ok(TaskChecker {
            ideal: NCIdeal::new(generators, order)?,
        })
    }

    pub fn ideal(&self) -> &NCIdeal {
        &self.ideal
    }

    pub fn iterations(&self) -> usize {
        self.ideal.iterations()
    }

    pub fn is_saturated(&self) -> bool {
        self.ideal.is_complete()
    }

    /// First candidate that reduces to zero against the current basis.
    pub fn try_candidates(&self, candidates: &[Polynomial]) -> Option<(usize, Certificate)> {
        candidates.iter().enumerate().find_map(|(i, c)| {
            if c.is_zero() {
                return Some((i, Certificate::default()));
            }
            let r = self.ideal.reduce(c);
            r.poly.is_zero().then_some((i, r.cert))
        })
    }

    /// Runs at most `ops` completion iterations; returns how many ran.
    pub fn advance(&mut self, ops: usize) -> usize {
        let mut n = 0;
        while n < ops && self.ideal.step(None, true) {
            n += 1;
        }
        n
    }
}

/// Checks the candidates before every completion iteration, for at most
/// `maxiter` iterations.
pub fn check_task(
    task: &IdealisationTask,
    order: MonomialOrder,
    maxiter: usize,
) -> Result<TaskOutcome, LogicError> {
    if task.candidates.is_empty() {
        return Ok(TaskOutcome::Unknown);
    }
    if let Some(i) = task.candidates.iter().position(Polynomial::is_zero) {
        return Ok(TaskOutcome::Proved {
            candidate: i,
            certificate: Certificate::default(),
        });
    }
    let mut checker = TaskChecker::new(task.generators.clone(), order)?;
    loop {
        if let Some((candidate, certificate)) = checker.try_candidates(&task.candidates) {
            return Ok(TaskOutcome::Proved { candidate, certificate });
        }
        if checker.iterations() >= maxiter || checker.advance(1) == 0 {
            return Ok(TaskOutcome::Unknown);
        }
    }
}
