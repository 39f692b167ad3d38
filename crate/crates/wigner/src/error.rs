use thiserror::Error;

/// Errors raised by the phase-space bridge.
#[derive(Debug, Error)]
pub enum WignerError {
    /// Planck constant must be positive and finite.
    #[error("hbar must be positive and finite, got {0}")]
    BadHbar(f64),

    /// The transform is only defined for Hermitian input; the residue is
    /// max |rho - rho^dagger| relative to the matrix scale.
    #[error("density matrix is not Hermitian (residue {0:.3e} > 1e-10)")]
    NonHermitian(f64),

    /// Forward transform of a Hermitian matrix must be real; a larger
    /// imaginary residue indicates corrupted input.
    #[error("transform output has imaginary residue {0:.3e} > 1e-12")]
    ComplexResidue(f64),

    /// Field or matrix geometry does not match the expected lattice.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// The potential or its derivatives cannot drive this evolution.
    #[error("invalid operator: {0}")]
    InvalidOperator(String),

    /// A sampled coefficient is not finite.
    #[error("coefficient overflow: {0}")]
    NonFiniteCoefficient(String),

    /// Field values must be finite (and normalized where required).
    #[error("invalid field: {0}")]
    BadField(String),

    /// Time step must be positive and finite.
    #[error("time step must be positive and finite, got {0}")]
    BadTimeStep(f64),

    /// Explicit stability limit for the combined advection, diffusion and
    /// high-order correction stencils.
    #[error(
        "time step {dt:.6e} violates the stability bounds (advection <= 0.9, \
         diffusion plus corrections <= 0.9); largest stable step is {required_dt:.6e}"
    )]
    CflViolation { dt: f64, required_dt: f64 },

    /// The explicit update grew without bound; the run is aborted.
    #[error(
        "evolution unstable at step {step}: field magnitude grew by {ratio:.3e} \
         relative to the initial state"
    )]
    Unstable { step: usize, ratio: f64 },

    /// Errors forwarded from the density-matrix layer.
    #[error(transparent)]
    Quantum(#[from] meso_quantum::QuantumError),
}

pub type Result<T> = std::result::Result<T, WignerError>;
