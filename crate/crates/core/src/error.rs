//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// L_D is undefined for beta2 = 0.
    #[error("degenerate dispersion: beta2 = 0, dispersion length undefined")]
    DegenerateDispersion,

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid SSFM config: {0}")]
    InvalidConfig(String),

    /// Field left the finite range while stepping; the index names the
    /// split step that produced the first non-finite sample.
    #[error("numerical divergence at SSFM step {step}")]
    SsfmDivergence { step: usize },

    #[error("grid node (t={t}, zeta={zeta}) outside snapshot coverage")]
    Coverage { t: f64, zeta: f64 },

    #[error("invalid network architecture: {0}")]
    InvalidArchitecture(String),

    #[error("gradient length {got} does not match parameter count {expected}")]
    InvalidGradient { expected: usize, got: usize },

    #[error("non-finite loss at {context}")]
    Divergence { context: String },

    #[error("coefficient count {got} does not match basis count {expected}")]
    InvalidCoefficients { expected: usize, got: usize },

    #[error("bit rate {rate} outside swept range [{min}, {max}]")]
    RateOutOfRange { rate: f64, min: f64, max: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error("checkpoint format error: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
