use std::io;
use thiserror::Error;

/// Errors produced by table construction, solvers, and generators.
#[derive(Debug, Error)]
pub enum SisrError {
    /// A full-enumeration request beyond the supported feature budget.
    #[error("feature count {p} needs {budget} coalitions, above the full-enumeration cap (p <= {max_p})")]
    Capacity { p: usize, budget: u128, max_p: usize },
    /// Inputs whose shapes or required entries are inconsistent.
    #[error("structural error: {0}")]
    Structural(String),
    /// Arguments outside an operation's domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// Malformed or unusable data values.
    #[error("data error: {0}")]
    Data(String),
    /// A numerical procedure failed (singular system, non-invertible transform).
    #[error("numerical error: {0}")]
    Numerical(String),
    /// Every payoff equals the baseline, leaving nothing to attribute.
    #[error("flat payoff table: every coalition value equals the empty-coalition baseline")]
    FlatPayoff,
    /// Unknown scheme, transform, or experiment name.
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, SisrError>;
