//! One step of the coarse-graining calculus: collapse clusters of
//! coordinates to their centres of mass and eliminate the internal offsets.
//!
//! Every potential term and every decoherence generator is rewritten via
//! `x_j = y_α + r_j` and truncated at first multipolar order. Offset-free
//! parts survive directly: potential parts merge into the coarse
//! Hamiltonian, generator parts keep their strength (content-squared folded,
//! an exact identity). Each *distinct* first-order coupling shape — the
//! coarse polynomial multiplying one offset — becomes an independent
//! white-noise decoherence channel whose strength `σ²·τ` comes from the
//! moment model, keyed by the clusters the participating offsets live in.
//! Channel coefficients are not squared into the strength: the variance is a
//! per-channel model parameter, exactly as the coarse rates enter the
//! reduced equations as new phenomenological constants.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::AlgebraError;
use crate::expansion::{com_var, multipolar_truncate, substitute_com};
use crate::liouvillian::LiouvillianSpec;
use crate::poly::Polynomial;
use crate::system::{ClusterPartition, MomentModel};

/// Result of one reduction: the coarser operator plus bookkeeping on what
/// the truncation discarded and spawned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionStep {
    pub spec: LiouvillianSpec,
    /// Potential monomials beyond first multipolar order (or depending on
    /// offsets alone) were dropped.
    pub hamiltonian_residual: bool,
    /// Same, for decoherence generators.
    pub decoherence_residual: bool,
    /// Number of distinct first-order coupling shapes that spawned
    /// decoherence channels.
    pub spawned_channels: usize,
}

/// Derive the level-`n+1` operator from a level-`n` one under a cluster
/// partition of its coordinates.
pub fn reduce_once(
    spec: &LiouvillianSpec,
    partition: &ClusterPartition,
    moments: &MomentModel,
) -> Result<ReductionStep, AlgebraError> {
    spec.validate()?;
    moments.validate()?;
    let n = spec.coordinates.len();
    if partition.len() != n {
        return Err(AlgebraError::InconsistentPartitionChain {
            level: spec.level as usize,
            coordinates: n,
            assigned: partition.len(),
        });
    }
    let nc = partition.n_clusters();
    let mut masses = vec![crate::poly::Coeff::from_integer(0.into()); nc];
    for (j, m) in spec.masses.iter().enumerate() {
        masses[partition.cluster_of(j)] += m;
    }
    let coords: Vec<String> = (0..nc).map(com_var).collect();
    let mut out = LiouvillianSpec::new(spec.level + 1, coords, masses)?;

    let mut hamiltonian_residual = false;
    let mut decoherence_residual = false;
    // Distinct coupling shape -> clusters whose offsets drive it.
    let mut channels: BTreeMap<Polynomial, BTreeSet<usize>> = BTreeMap::new();
    let collect = |exp: &crate::expansion::ExpansionResult,
                       channels: &mut BTreeMap<Polynomial, BTreeSet<usize>>| {
        for ch in &exp.channels {
            let (_, prim) = ch.multiplier.primitive();
            channels
                .entry(prim)
                .or_default()
                .insert(partition.cluster_of(ch.particle));
        }
    };

    for term in &spec.hamiltonian {
        let full = term.polynomial.scale(&term.coefficient);
        let exp = multipolar_truncate(&substitute_com(&full, partition)?);
        out.add_potential(exp.zeroth.clone())?;
        hamiltonian_residual |= exp.residual_discarded;
        collect(&exp, &mut channels);
    }

    for term in &spec.decoherence {
        let exp = multipolar_truncate(&substitute_com(&term.generator, partition)?);
        if !exp.zeroth.is_zero() {
            out.add_decoherence(term.strength.clone(), exp.zeroth.clone())?;
        }
        decoherence_residual |= exp.residual_discarded;
        collect(&exp, &mut channels);
    }

    let spawned_channels = channels.len();
    for (generator, support) in channels {
        let strength = moments.strength_for(&support);
        out.add_decoherence(strength, generator)?;
    }

    Ok(ReductionStep {
        spec: out,
        hamiltonian_residual,
        decoherence_residual,
        spawned_channels,
    })
}
