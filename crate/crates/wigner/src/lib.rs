//! Phase-space bridge between the quantum and classical engines.
//!
//! A density matrix ρ on an M-node position grid maps onto a real field
//! W(x, p) on the half-step lattice of [`WignerGrid`] via the exact discrete
//! pair
//!
//!   W[s, n] = (2Δx/h) Σ_k e^{iπnk/K} ρ[(s−k)/2, (s+k)/2],
//!   ρ[a, b] = (h/(2ΔxK)) Σ_n e^{−iπnk/K} W[a+b, n],
//!
//! with K = 2M−1 slots per axis and momenta p_n = πħn/(KΔx).  The field is
//! real for Hermitian input, reproduces the position density and trace
//! exactly on the node rows, and may go negative — negativity is physical
//! and is never clamped.
//!
//! [`evolve_wigner`] integrates the ħ²-corrected transport equation
//!
//!   ∂_t W = −(p/μ)∂_x W + V′∂_p W + γV″²∂²_p W
//!           + (ħ²/24)(V‴∂³_p W − 2γV″V⁗∂⁴_p W),
//!
//! reusing the classical finite-volume kernels for the advection and
//! diffusion pieces and fourth-order central stencils for the corrections.
//! For quadratic potentials the equation is exact (every higher bracket
//! vanishes), so the trajectory matches the transform of the quantum
//! evolution up to discretization; for quartic potentials the leading
//! neglected term is O(ħ⁴), so halving ħ shrinks the gap to the quantum
//! oracle by roughly sixteen.
//!
//! [`semiclassical_ratios`] quantifies when the corrections are negligible,
//! and [`boundary_decay_check`] measures the far-off-diagonal tail whose
//! decay justifies discarding the boundary term when integrating the
//! transform by parts.

mod diagnostics;
mod error;
mod evolve;
mod field;
mod grid;
mod stencil;
mod transform;

pub use diagnostics::{
    boundary_decay_check, semiclassical_ratios, BoundaryDecay, SemiclassicalRatios,
    ValidityRatio, BOUNDARY_DECAY_THRESHOLD,
};
pub use error::{Result, WignerError};
pub use evolve::{
    evolve_wigner, evolve_wigner_with, stable_dt_wigner, WignerTrajectory, ADVECTION_LIMIT,
    CORRECTION_LIMIT,
};
pub use field::{FieldMoments, WignerField, MASS_TOLERANCE};
pub use grid::WignerGrid;
pub use transform::{
    wigner_forward, wigner_inverse, HERMITICITY_TOLERANCE, IMAGINARY_TOLERANCE,
};
