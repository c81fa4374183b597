use thiserror::Error;

use crate::factorization::Violation;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid network: {0}")]
    InvalidNetwork(String),

    #[error("network is not a tree")]
    NotATree,

    #[error("network is not simple")]
    NotSimple,

    #[error("network is not Eulerian")]
    NotEulerian,

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("invalid walk: {0}")]
    InvalidWalk(String),

    #[error("attack duration {alpha} out of range: {reason}")]
    InvalidAlpha { alpha: String, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("zero-measure set")]
    ZeroMeasure,

    #[error("invalid factorization: {}", format_violations(.0))]
    InvalidFactorization(Vec<Violation>),

    #[error("size guard: {0}")]
    SizeGuard(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

fn format_violations(violations: &[Violation]) -> String {
    violations
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

pub(crate) fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}
