use thiserror::Error;

use crate::netlist::ValidationReport;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("empty netlist has no branches")]
    EmptyNetlist,
    #[error("line {line}: duplicate branch name `{name}`")]
    DuplicateBranch { line: usize, name: String },
    #[error("line {line}: value of `{name}` must be positive, got {value}")]
    NonPositiveValue { line: usize, name: String, value: f64 },
    #[error("line {line}: unknown element kind for `{name}` (expected a C, L or J prefix)")]
    UnknownElement { line: usize, name: String },
    #[error("circuit is not admissible for the method of nodes:\n{0}")]
    Invalid(ValidationReport),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("capacitance matrix is ill-conditioned (condition number {0:.3e})")]
    IllConditioned(f64),
    #[error("numerical non-convergence: {0}")]
    NonConvergence(String),
    #[error("passivity violated: Re Y({omega}) = {re} < 0")]
    Passivity { omega: f64, re: f64 },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures of an iterative or truncated numerical procedure.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NonConvergence(_) | Error::IllConditioned(_))
    }
}
