//! Quantum engine for single-coordinate master equations on a position grid.
//!
//! The dynamics integrated here is
//!
//!   d rho/dt = (1/(i hbar)) [H, rho] - sum_k (gamma_k / hbar^2) [g_k, [g_k, rho]]
//!
//! with H = -hbar^2/(2 mu) d^2/dx^2 + V(x) discretized by central differences
//! on a hard-wall grid, and every channel generator g_k diagonal in position.
//! The crate provides:
//!
//! * [`GridBasis`] / [`DensityMatrix`] — the state representation with
//!   dx-weighted traces and the standard initial states (Gaussian packets,
//!   superpositions, standing waves, mixtures);
//! * [`build_operators`] — sampling a validated symbolic operator onto the
//!   grid, with [`KineticMode::Frozen`] for the infinite-mass limit;
//! * [`evolve_density`] — RK4 integration with per-step hermitization and
//!   trace/positivity monitors;
//! * [`dephasing_closed_form`] — the exact frozen-kinetic solution
//!   rho(x,x',t) = rho(x,x',0) e^{-(gamma/hbar^2)(g(x)-g(x'))^2 t};
//! * [`unravel_stochastic`] — a pure-state noise unraveling whose ensemble
//!   mean reproduces the master equation at O(1/sqrt(N)), with
//!   bit-reproducible stream-per-trajectory seeding.

mod density;
mod error;
mod evolve;
mod grid;
mod operators;
mod unravel;

pub use density::{coherence_metrics, CoherenceMetrics, DensityMatrix};
pub use error::{QuantumError, Result};
pub use evolve::{
    dephasing_closed_form, evolve_density, evolve_density_with, Evolution, EvolveOptions,
    MonitorSummary, StepRecord,
};
pub use grid::GridBasis;
pub use operators::{build_operators, Channel, KineticMode, QuantumOperatorSet};
pub use unravel::{
    unravel_stochastic, unravel_stochastic_with, UnravelOptions, UnravelOutcome,
};
