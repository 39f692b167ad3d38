//! Finite-volume transport of classical phase-space densities.
//!
//! The classical limit of a coarse-grained evolution operator is a
//! Fokker-Planck equation: Liouville streaming plus momentum diffusion
//! fed by the decoherence channels,
//!
//!   d rho/dt = -(p/mu) d rho/dx + V'(x) d rho/dp
//!              + sum_k D_k(x) d^2 rho/dp^2,       D_k(x) = gamma_k g_k'(x)^2.
//!
//! This crate samples those coefficients on a cell-centered `(x, p)` grid
//! (`build_classical`), advances densities with a conservative, positivity-
//! preserving split scheme (`step_classical`), and reports low-order
//! observables (`moments`).  Two coordinates are handled in pair mode on a
//! four-dimensional grid, where difference couplings g(y1 - y2) diffuse the
//! relative momentum through (d/dp1 - d/dp2)^2.
//!
//! The one-dimensional kernels live in [`kernels`] and are shared with the
//! phase-space formulation of the quantum engine, which adds its own
//! higher-derivative corrections on top of the same transport scheme.

mod error;
mod field;
mod grid;
pub mod kernels;
mod moments;
mod ops;
mod step;

pub use error::{ClassicalError, Result};
pub use field::{PairPhaseField, PhaseSpaceField, MASS_TOLERANCE, NEGATIVITY_TOLERANCE};
pub use grid::{PairGrid, PhaseGrid};
pub use moments::{moments, Moments};
pub use ops::{
    build_classical, ClassicalChannel, ClassicalGrids, ClassicalOperatorSet, PairChannel,
    PairCoupling, PairOperatorSet, SingleOperatorSet,
};
pub use step::{stable_dt_pair, stable_dt_single, step_classical, step_classical_pair};
