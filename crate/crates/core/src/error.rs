use thiserror::Error;

use crate::config::Issue;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),
    #[error("invalid configuration: {}", join(.0))]
    InvalidConfig(Vec<Issue>),
    #[error("coupling length {value} m outside (0, {max}] m")]
    LengthOutOfRange { value: f64, max: f64 },
    #[error("equal split {0} is unreachable with the configured coupling efficiency")]
    UnreachableSplit(f64),
    #[error("shared coupling length {0} m outside (0, pi/(2 kappa)]")]
    InvalidSharedLength(f64),
    #[error("user coincides with antenna position")]
    ZeroDistance,
    #[error("negative input: {0}")]
    Negative(&'static str),
}

fn join(issues: &[Issue]) -> String {
    issues
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
