//! Error type for grid construction, operator assembly, and evolution.

use thiserror::Error;

/// Everything that can go wrong while building or running the quantum engine.
#[derive(Debug, Error)]
pub enum QuantumError {
    /// Grid must have at least two points and increasing bounds.
    #[error("grid needs at least 2 points and x_max > x_min (got m = {m}, span = {span})")]
    BadGrid { m: usize, span: f64 },

    /// The engine integrates a single coordinate; reduce the operator first.
    #[error("expected a single-coordinate operator, got {0} coordinates")]
    MultiCoordinate(usize),

    /// The symbolic operator failed its own consistency checks.
    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    /// A coefficient (mass or channel strength) does not fit in an f64.
    #[error("coefficient {0} is not representable as f64")]
    CoefficientOverflow(String),

    /// Planck constant must be positive.
    #[error("hbar must be positive, got {0}")]
    BadHbar(f64),

    /// Matrix or vector shape does not match the grid.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// Initial state violates a density-matrix invariant.
    #[error("invalid state: {0}")]
    BadState(String),

    /// The closed-form dephasing solution only exists when the kinetic term
    /// is frozen out (infinite-mass limit).
    #[error("closed-form dephasing requires the kinetic term to be frozen")]
    KineticEnabled,

    /// The closed-form dephasing solution covers exactly one channel.
    #[error("closed-form dephasing needs exactly one channel, got {0}")]
    NeedSingleChannel(usize),

    /// Norm blew up: the step size is too large for this operator.
    #[error("evolution diverged at step {step} (norm ratio {ratio:.3e}); reduce dt")]
    Instability { step: usize, ratio: f64 },

    /// Stochastic averaging needs at least one trajectory.
    #[error("trajectory count must be positive")]
    NoTrajectories,
}

pub type Result<T> = std::result::Result<T, QuantumError>;
