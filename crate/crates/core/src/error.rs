//! Error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("basis mismatch: expected dimension {expected}, got {got}")]
    BasisMismatch { expected: usize, got: usize },

    #[error("state ({n_l},{n_r}) has {} photons, exceeding truncation {truncation}", n_l + n_r)]
    StateOutsideTruncation { n_l: u32, n_r: u32, truncation: u32 },

    #[error("invariant violated: {what} = {value:.3e} (tolerance {tolerance:.1e})")]
    InvariantViolation {
        what: &'static str,
        value: f64,
        tolerance: f64,
    },

    #[error("matrix exponential failed ({reason}); 1-norm {norm:.3e}, {squarings} squarings")]
    ExpmFailure {
        norm: f64,
        squarings: u32,
        reason: String,
    },

    #[error("integration step {step} exceeds propagation length {z}")]
    StepExceedsLength { step: f64, z: f64 },

    #[error("non-finite entries after {steps} steps of size {step}; step too coarse for the given rates")]
    NonFinite { steps: usize, step: f64 },

    #[error("linear solve hit a near-zero pivot ({pivot:.3e}); matrix is singular")]
    SingularMatrix { pivot: f64 },

    #[error("Liouvillian is defective (eigenvector condition {condition:.3e}); eigenmode propagation refused, use the matrix-exponential path")]
    DefectiveLiouvillian { condition: f64 },

    #[error("fit did not converge after {iterations} iterations; residual norm {residual:.3e}")]
    FitDidNotConverge { iterations: usize, residual: f64 },

    #[error("need at least {need} samples for the fit, got {got}")]
    TooFewSamples { got: usize, need: usize },

    #[error("no interior minimum found in [{lo}, {hi}]")]
    NoInteriorMinimum { lo: f64, hi: f64 },

    #[error("visibility undefined at z = {z}: distinguishable baseline vanishes there")]
    VisibilityUndefined { z: f64 },

    #[error("calibration target {target} unreachable: ideal visibility at the calibration point is {ideal:.6}")]
    CalibrationOutOfRange { target: f64, ideal: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
