//! Exact polynomial arithmetic in the free algebra over the rationals.

mod adjoint;
mod algebra;
mod display;
mod parse;
mod poly;
mod word;

pub use adjoint::{add_adj, pinv, AdjointMap};
pub use algebra::{Algebra, Var};
pub use display::{PolyDisplay, TermDisplay, WordDisplay};
pub use parse::ParseError;
pub use poly::{Polynomial, Rational, Term};
pub use word::Word;
pub(crate) use word::find_subword as word_find;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("invalid variable name `{0}`")]
    InvalidName(String),
    #[error("variable `{0}` declared twice")]
    DuplicateVariable(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("variable `{0}` has no adjoint partner")]
    MissingAdjoint(String),
    #[error("adjoint pairing is not an involution at `{0}`")]
    NotInvolutive(String),
    #[error("polynomial uses variable index {0}, outside the algebra")]
    ForeignVariable(u32),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
