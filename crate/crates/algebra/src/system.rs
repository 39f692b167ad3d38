//! Microscopic input data: particle ensembles, cluster partitions, coupling
//! aggregation, and the statistical model for eliminated internal moments.

use std::collections::{BTreeMap, BTreeSet};

use num::{Signed, Zero};

use crate::error::AlgebraError;
use crate::poly::{Coeff, Polynomial};

/// An ensemble of point particles with pairwise and external couplings.
///
/// The total potential is
/// `Σ_{j<k} q_{j,k} U(x_j − x_k) + Σ_j q_j V(x_j)`
/// with a single pair-potential shape `U` and external shape `V`, both
/// univariate polynomials.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParticleSystem {
    pub masses: Vec<Coeff>,
    /// Symmetric pair couplings, keyed by `(j, k)` with `j < k` (0-based).
    pub pair_coupling: BTreeMap<(usize, usize), Coeff>,
    /// Per-particle coupling to the external potential.
    pub external_coupling: Vec<Coeff>,
    /// Pair potential `U(s)` as a polynomial in one separation variable.
    pub pair_potential: Polynomial,
    /// External potential `V(x)` as a polynomial in one variable.
    pub external_potential: Polynomial,
}

impl ParticleSystem {
    pub fn len(&self) -> usize {
        self.masses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.masses.is_empty()
    }

    pub fn validate(&self) -> Result<(), AlgebraError> {
        let n = self.masses.len();
        for (j, m) in self.masses.iter().enumerate() {
            if !m.is_positive() {
                return Err(AlgebraError::NonPositiveMass(format!("x{}", j + 1)));
            }
        }
        if self.external_coupling.len() != n {
            return Err(AlgebraError::CouplingLengthMismatch {
                expected: n,
                found: self.external_coupling.len(),
            });
        }
        for &(j, k) in self.pair_coupling.keys() {
            if j >= k || k >= n {
                return Err(AlgebraError::BadPairCoupling(j, k));
            }
        }
        for p in [&self.pair_potential, &self.external_potential] {
            if p.vars().len() != 1 {
                return Err(AlgebraError::NotUnivariate(p.vars().len()));
            }
        }
        Ok(())
    }

    /// Uniform all-to-all couplings: every pair gets `q_pair`, every particle
    /// `q_ext`.
    pub fn uniform(
        masses: Vec<Coeff>,
        q_pair: Coeff,
        q_ext: Coeff,
        pair_potential: Polynomial,
        external_potential: Polynomial,
    ) -> Self {
        let n = masses.len();
        let mut pair = BTreeMap::new();
        if !q_pair.is_zero() {
            for j in 0..n {
                for k in (j + 1)..n {
                    pair.insert((j, k), q_pair.clone());
                }
            }
        }
        ParticleSystem {
            masses,
            pair_coupling: pair,
            external_coupling: vec![q_ext; n],
            pair_potential,
            external_potential,
        }
    }
}

/// Assignment of each particle (by index) to a cluster `0..n_clusters`.
///
/// Clusters must be nonempty and contiguously numbered so that cluster `α`
/// of the reduced description is well defined.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterPartition {
    assignment: Vec<usize>,
    n_clusters: usize,
}

impl ClusterPartition {
    pub fn new(assignment: Vec<usize>) -> Result<Self, AlgebraError> {
        let n_clusters = assignment.iter().copied().max().map_or(0, |m| m + 1);
        let mut seen = vec![false; n_clusters];
        for &a in &assignment {
            seen[a] = true;
        }
        for (alpha, s) in seen.iter().enumerate() {
            if !s {
                return Err(AlgebraError::EmptyCluster(alpha));
            }
        }
        Ok(ClusterPartition {
            assignment,
            n_clusters,
        })
    }

    pub fn len(&self) -> usize {
        self.assignment.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assignment.is_empty()
    }

    pub fn n_clusters(&self) -> usize {
        self.n_clusters
    }

    pub fn cluster_of(&self, particle: usize) -> usize {
        self.assignment[particle]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    pub fn members(&self, alpha: usize) -> Vec<usize> {
        (0..self.assignment.len())
            .filter(|&j| self.assignment[j] == alpha)
            .collect()
    }
}

/// Couplings and masses of the coarse description induced by a partition:
/// `Q_αβ = Σ_{j∈α, k∈β} q_{j,k}`, `Q_α = Σ_{j∈α} q_j`, `μ_α = Σ_{j∈α} m_j`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CouplingAggregates {
    /// Pair couplings between clusters, keyed `(α, β)` with `α < β`.
    pub pair: BTreeMap<(usize, usize), Coeff>,
    /// External coupling per cluster.
    pub external: Vec<Coeff>,
    /// Total mass per cluster.
    pub masses: Vec<Coeff>,
}

/// Sum microscopic couplings and masses over a partition. Couplings internal
/// to a cluster do not appear: they belong to the eliminated internal sector.
pub fn aggregate_couplings(
    system: &ParticleSystem,
    partition: &ClusterPartition,
) -> Result<CouplingAggregates, AlgebraError> {
    system.validate()?;
    if partition.len() != system.len() {
        return Err(AlgebraError::PartitionSizeMismatch {
            poly_vars: system.len(),
            assigned: partition.len(),
        });
    }
    let nc = partition.n_clusters();
    let mut pair: BTreeMap<(usize, usize), Coeff> = BTreeMap::new();
    for (&(j, k), q) in &system.pair_coupling {
        let (a, b) = (partition.cluster_of(j), partition.cluster_of(k));
        if a == b {
            continue;
        }
        let key = (a.min(b), a.max(b));
        let entry = pair.entry(key).or_insert_with(Coeff::zero);
        *entry += q;
    }
    pair.retain(|_, q| !q.is_zero());
    let mut external = vec![Coeff::zero(); nc];
    for (j, q) in system.external_coupling.iter().enumerate() {
        external[partition.cluster_of(j)] += q;
    }
    let mut masses = vec![Coeff::zero(); nc];
    for (j, m) in system.masses.iter().enumerate() {
        masses[partition.cluster_of(j)] += m;
    }
    Ok(CouplingAggregates {
        pair,
        external,
        masses,
    })
}

/// Statistics of the eliminated internal moments.
///
/// Each independent linear channel of internal offsets carries a white-noise
/// variance; a reduction step converts it into a decoherence strength
/// `γ = σ² · τ` where `τ` is a correlation-timescale factor. Variances can be
/// set per cluster (single-cluster channels), per cluster pair, or fall back
/// to a default.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentModel {
    pub default_variance: Coeff,
    pub timescale: Coeff,
    pub per_cluster: BTreeMap<usize, Coeff>,
    pub per_pair: BTreeMap<(usize, usize), Coeff>,
}

impl MomentModel {
    /// Variance 1, timescale 1 everywhere.
    pub fn uniform() -> Self {
        MomentModel {
            default_variance: Coeff::from_integer(1.into()),
            timescale: Coeff::from_integer(1.into()),
            per_cluster: BTreeMap::new(),
            per_pair: BTreeMap::new(),
        }
    }

    pub fn with_default_variance(variance: Coeff) -> Self {
        MomentModel {
            default_variance: variance,
            ..Self::uniform()
        }
    }

    pub fn validate(&self) -> Result<(), AlgebraError> {
        if self.default_variance.is_negative() {
            return Err(AlgebraError::NegativeVariance("default".into()));
        }
        if self.timescale.is_negative() {
            return Err(AlgebraError::NegativeTimescale);
        }
        for (alpha, v) in &self.per_cluster {
            if v.is_negative() {
                return Err(AlgebraError::NegativeVariance(format!("cluster {alpha}")));
            }
        }
        for (&(a, b), v) in &self.per_pair {
            if v.is_negative() {
                return Err(AlgebraError::NegativeVariance(format!("pair ({a}, {b})")));
            }
        }
        Ok(())
    }

    /// Decoherence strength for a channel supported on the given clusters:
    /// `γ = σ²(support) · τ`.
    pub fn strength_for(&self, support: &BTreeSet<usize>) -> Coeff {
        let variance = match support.len() {
            1 => {
                let alpha = *support.iter().next().unwrap();
                self.per_cluster
                    .get(&alpha)
                    .cloned()
                    .unwrap_or_else(|| self.default_variance.clone())
            }
            2 => {
                let mut it = support.iter();
                let a = *it.next().unwrap();
                let b = *it.next().unwrap();
                self.per_pair
                    .get(&(a.min(b), a.max(b)))
                    .cloned()
                    .unwrap_or_else(|| self.default_variance.clone())
            }
            _ => self.default_variance.clone(),
        };
        variance * &self.timescale
    }
}
