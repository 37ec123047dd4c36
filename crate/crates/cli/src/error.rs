use std::io;
use std::path::PathBuf;

use opcert_core::certify::CertifyError;
use opcert_core::gb::GbError;
use opcert_core::heuristics::HeuristicError;
use opcert_core::logic::LogicError;
use thiserror::Error;

/// A problem-file error at a 1-based line (0 when not yet located).
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}: {message}")]
pub struct ProblemError {
    pub line: usize,
    pub message: String,
}

impl ProblemError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ProblemError {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn at(mut self, line: usize) -> Self {
        if self.line == 0 {
            self.line = line;
        }
        self
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{}: {error}", path.display())]
    Problem { path: PathBuf, error: ProblemError },
    #[error("invalid certificate document: {0}")]
    Document(String),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Certify(#[from] CertifyError),
    #[error(transparent)]
    Gb(#[from] GbError),
    #[error(transparent)]
    Heuristic(#[from] HeuristicError),
    #[error(transparent)]
    Logic(#[from] LogicError),
}

/// Process exit status: 0 done, 1 not established, 2 bad input.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExitCode(pub i32);

impl ExitCode {
    pub const SUCCESS: ExitCode = ExitCode(0);
    pub const UNKNOWN: ExitCode = ExitCode(1);
    pub const INPUT: ExitCode = ExitCode(2);
}
