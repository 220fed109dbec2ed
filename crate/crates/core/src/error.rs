use thiserror::Error;

/// Errors produced by the estimation pipeline.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("insufficient data: got {n} observations, need at least {min}")]
    InsufficientData { n: usize, min: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("value {value} outside the admissible domain {domain}")]
    DomainError { value: f64, domain: &'static str },

    #[error("point ({x}, {y}) lies outside the grid extent [-{half_width}, {half_width}]")]
    GridOverflow { x: f64, y: f64, half_width: f64 },

    #[error("inverse transform left an imaginary residue of {residue:e} (relative); the spectrum is not Hermitian")]
    AsymmetrySignal { residue: f64 },

    #[error("fixed-point iteration did not converge at {unconverged} frequencies")]
    NonConvergence { unconverged: usize },

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("numerical error: {message} (achieved error estimate {achieved:e})")]
    Numerical { message: String, achieved: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
