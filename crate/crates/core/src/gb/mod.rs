//! Buchberger-style completion in the free algebra with cofactor tracing.

mod ideal;
mod mono;
mod reduce;

pub use ideal::{interreduce, GbError, GbOptions, NCIdeal, TracedPolynomial};
