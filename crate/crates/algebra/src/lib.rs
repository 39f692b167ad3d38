//! Exact symbolic layer for coarse-graining clustered particle systems.
//!
//! A generator at scale `n` is held as a [`LiouvillianSpec`]: a kinetic term
//! (implied by the coordinate masses), a list of polynomial Hamiltonian terms
//! `c · p(x)`, and a list of double-bracket decoherence terms
//! `γ {g, {g, ·}}` identified by their generator polynomial `g`.
//!
//! One reduction step ([`reduce_once`]) groups the coordinates into clusters,
//! rewrites every coordinate as centre of mass plus internal offset
//! (`x_j = y_α + r_j`, see [`substitute_com`]), truncates the internal
//! dependence at first multipolar order ([`multipolar_truncate`]), and
//! eliminates the internal offsets as white noise: the surviving linear
//! channels become new decoherence generators whose strengths come from a
//! [`MomentModel`]. Iterating the step yields a hierarchy of generators whose
//! structural fingerprint ([`signature`]) eventually stops changing; the
//! number of steps needed is the invariance depth
//! ([`find_invariance_depth`]).
//!
//! All coefficients are exact rationals. Conversion to floating point happens
//! only where the numerical engines consume a spec; structure detection
//! (signatures, invariance depths) must never be at the mercy of rounding.
//!
//! Every value in this crate is an immutable piece of data; all operations
//! are pure functions, so sharing across threads needs no synchronization.

mod error;
mod expansion;
mod liouvillian;
mod poly;
mod reduce;
mod signature;
mod system;

pub use error::AlgebraError;
pub use expansion::{multipolar_truncate, substitute_com, Channel, ExpansionResult};
pub use liouvillian::{single_coordinate_spec, DecoherenceTerm, HamiltonianTerm, LiouvillianSpec};
pub use poly::{poly_derivative, Coeff, Polynomial};
pub use reduce::{reduce_once, ReductionStep};
pub use signature::{
    canonical_pattern, find_invariance_depth, signature, InvarianceReport, Signature, TermRole,
    MAX_PATTERN_VARS,
};
pub use system::{aggregate_couplings, ClusterPartition, CouplingAggregates, MomentModel, ParticleSystem};

/// Convenience: exact rational from an integer.
pub fn rat(n: i64) -> Coeff {
    Coeff::from_integer(n.into())
}

/// Convenience: exact rational `n/d`.
pub fn ratio(n: i64, d: i64) -> Coeff {
    Coeff::new(n.into(), d.into())
}
