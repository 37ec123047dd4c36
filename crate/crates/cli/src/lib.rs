//! Command-line front end: problem files in, proofs and certificate
//! documents out.

pub mod commands;
pub mod document;
pub mod error;
pub mod fixtures;
pub mod problem;

pub use commands::{run, Cli, Command, Outcome};
pub use document::{verify, CertificateDocument, VerifyReport};
pub use error::{CliError, ExitCode, ProblemError};
pub use fixtures::{run_all, Fixture, FixtureId, Report};
pub use problem::Problem;
