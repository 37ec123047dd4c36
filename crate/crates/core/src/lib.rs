//! Certified reasoning about linear operators through noncommutative
//! polynomial computations over the rationals.

pub mod certify;
pub mod freealg;
pub mod gb;
pub mod heuristics;
pub mod logic;
pub mod order;
pub mod quiver;

pub use certify::{certify, Certificate, CertifyOptions, CertifyReport, Cofactor, Status};
pub use freealg::{add_adj, pinv, AdjointMap, Algebra, Polynomial, Rational, Term, Var, Word};
pub use gb::{interreduce, GbOptions, NCIdeal, TracedPolynomial};
pub use order::MonomialOrder;
pub use quiver::Quiver;
pub use heuristics::{
    apply_left_cancellability, apply_right_cancellability, find_equivalent_expression,
    find_range_factorisation, CancelHeuristic, CancelOptions, Finding, Heuristic, SearchSpec, Side,
};
pub use logic::{
    check_task, cnf, herbrand_terms, idealise, parse_statement, semi_decide, Budget, OperatorStatement, TermBounds,
    Verdict,
};
