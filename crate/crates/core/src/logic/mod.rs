//! Sorted operator statements: CNF, idealisation, Herbrand instances and
//! the dovetailed semi-decision procedure for `∀∃` statements.

mod cnf;
mod formula;
mod herbrand;
mod idealise;
mod parse;
mod procedure;
mod term;

use thiserror::Error;

use crate::freealg::AlgebraError;
use crate::gb::GbError;

pub use cnf::{cnf, Clause, Literal};
pub use formula::{Formula, OperatorStatement, Shape};
pub use herbrand::{herbrand_terms, Instantiation, TermBounds};
pub use idealise::{check_task, idealise, IdealisationTask, TaskChecker, TaskOutcome};
pub use parse::parse_statement;
pub use procedure::{semi_decide, Budget, ClauseProof, Proof, Verdict};
pub use term::{OpTerm, Sort, SortContext, TermKind};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LogicError {
    #[error("ill-sorted {op}: {left} vs {right}")]
    SortMismatch { op: &'static str, left: Sort, right: Sort },
    #[error("`{name}` declared with sort {first} and {second}")]
    ConflictingSort { name: String, first: Sort, second: Sort },
    #[error("no sort for `{0}`")]
    MissingSort(String),
    #[error("`{0}` has no adjoint partner")]
    NoPartner(String),
    #[error("empty product")]
    EmptyWord,
    #[error("formula has quantifiers where none are allowed")]
    NotQuantifierFree,
    #[error("expected a {expected} statement, found {found}")]
    WrongShape { expected: Shape, found: Shape },
    #[error("statement has free variables: {}", .0.join(", "))]
    NotClosed(Vec<String>),
    #[error("cannot infer the sort of `0`")]
    UnresolvedZero,
    #[error("integer {0} used as an operator")]
    BareScalar(i64),
    #[error("statement syntax error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Gb(#[from] GbError),
}
