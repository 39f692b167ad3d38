//! Error type for grid construction, operator assembly, and stepping.

use thiserror::Error;

/// Everything that can go wrong while building or running the classical engine.
#[derive(Debug, Error)]
pub enum ClassicalError {
    /// Grid axes need at least two cells and increasing bounds.
    #[error("phase-space grid needs >= 2 cells per axis and positive spans (got {0})")]
    BadGrid(String),

    /// The engine supports one coordinate (2D field) or two (pair mode).
    #[error("unsupported coordinate count {0} (1 supported, 2 in pair mode)")]
    UnsupportedCoordinates(usize),

    /// The symbolic operator failed its own consistency checks.
    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    /// A coefficient (mass or channel strength) does not fit in an f64.
    #[error("coefficient {0} is not representable as f64")]
    CoefficientOverflow(String),

    /// Pair-mode channels must act through one coordinate or a difference.
    #[error("unsupported channel generator: {0}")]
    UnsupportedChannel(String),

    /// Grid shape does not match the operator set.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// The step size is not a usable positive number.
    #[error("time step must be positive and finite (got {0})")]
    BadTimeStep(f64),

    /// The requested step violates the advection/diffusion stability bounds.
    #[error(
        "time step {dt:.6e} violates the CFL bounds (advection <= 0.9, diffusion <= 0.45); \
         largest stable step is {required_dt:.6e}"
    )]
    CflViolation { dt: f64, required_dt: f64 },

    /// Field violates a probability-density invariant.
    #[error("invalid field: {0}")]
    BadField(String),
}

pub type Result<T> = std::result::Result<T, ClassicalError>;
