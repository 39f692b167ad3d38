//! Structural fingerprints of evolution operators and the search for the
//! depth at which repeated reduction stops changing them.
//!
//! A signature is the set of `(role, pattern)` pairs where the pattern is a
//! polynomial shape made blind to everything inessential: unused coordinates
//! are dropped, the remaining ones are renamed `a, b, c, …` minimizing over
//! all permutations, and coefficients are normalized to primitive form. Two
//! operators share a signature exactly when their term shapes coincide up to
//! coordinate relabeling and coefficient rescaling.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::AlgebraError;
use crate::liouvillian::LiouvillianSpec;
use crate::poly::Polynomial;
use crate::reduce::reduce_once;
use crate::system::{ClusterPartition, MomentModel};

/// Whether a pattern came from a potential term or a decoherence generator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TermRole {
    Hamiltonian,
    Decoherence,
}

impl fmt::Display for TermRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TermRole::Hamiltonian => "H",
            TermRole::Decoherence => "G",
        })
    }
}

/// Canonical shape descriptor of one operator: a deduplicated, ordered set
/// of `(role, pattern)` pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Signature {
    patterns: BTreeSet<(TermRole, String)>,
}

impl Signature {
    pub fn is_empty(&self) -> bool {
        self.patterns.is_empty()
    }

    pub fn len(&self) -> usize {
        self.patterns.len()
    }

    pub fn patterns(&self) -> impl Iterator<Item = &(TermRole, String)> {
        self.patterns.iter()
    }

    /// One `role pattern` line per entry, deterministic order; the golden
    /// file format.
    pub fn canonical_text(&self) -> String {
        let mut out = String::new();
        for (role, pattern) in &self.patterns {
            out.push_str(&format!("{role} {pattern}\n"));
        }
        out
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_text())
    }
}

/// Cap on the number of distinct variables a single term may use: pattern
/// canonicalization enumerates all their permutations.
pub const MAX_PATTERN_VARS: usize = 6;

const SLOT_NAMES: [&str; MAX_PATTERN_VARS] = ["a", "b", "c", "d", "e", "f"];

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for sub in permutations(k - 1) {
        for pos in 0..=sub.len() {
            let mut p = sub.clone();
            p.insert(pos, k - 1);
            out.push(p);
        }
    }
    out
}

/// Shape of one polynomial up to coordinate relabeling and coefficient
/// rescaling: the lexicographically smallest primitive rendering over slot
/// names `a, b, …` across all permutations of the used variables.
pub fn canonical_pattern(p: &Polynomial) -> Result<String, AlgebraError> {
    let q = p.compact();
    let k = q.vars().len();
    if k > MAX_PATTERN_VARS {
        return Err(AlgebraError::PatternTooWide(k));
    }
    if q.is_zero() {
        return Ok("0".to_string());
    }
    if k == 0 {
        return Ok("1".to_string());
    }
    let slots = &SLOT_NAMES[..k];
    let mut best: Option<String> = None;
    for perm in permutations(k) {
        let relabeled = Polynomial::from_terms(
            slots,
            q.terms().map(|(e, c)| {
                let mut en = vec![0u32; k];
                for (i, &x) in e.iter().enumerate() {
                    en[perm[i]] = x;
                }
                (en, c.clone())
            }),
        );
        let (_, prim) = relabeled.primitive();
        let text = prim.canonical_text();
        if best.as_ref().map_or(true, |b| text < *b) {
            best = Some(text);
        }
    }
    Ok(best.unwrap())
}

/// Fingerprint the shapes of all potential terms and decoherence generators.
pub fn signature(spec: &LiouvillianSpec) -> Result<Signature, AlgebraError> {
    let mut patterns = BTreeSet::new();
    for t in &spec.hamiltonian {
        patterns.insert((TermRole::Hamiltonian, canonical_pattern(&t.polynomial)?));
    }
    for t in &spec.decoherence {
        patterns.insert((TermRole::Decoherence, canonical_pattern(&t.generator)?));
    }
    Ok(Signature { patterns })
}

/// Outcome of the invariance search: the stabilization depth (if found
/// within the budget) and the signature at every level visited.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvarianceReport {
    /// Number of reductions after which the signature stops changing;
    /// `None` when it kept changing within `max_depth`.
    pub depth: Option<usize>,
    /// `signatures[k]` fingerprints the operator after `k` reductions.
    pub signatures: Vec<Signature>,
    /// `chain[k]` is the operator after `k` reductions.
    pub chain: Vec<LiouvillianSpec>,
}

/// Iterate [`reduce_once`] down the partition chain until the signature
/// repeats. A repeat on the very first reduction means the operator family
/// was form-invariant from the start: depth 0; otherwise the depth is the
/// number of reductions taken to reach the repeated shape.
pub fn find_invariance_depth(
    spec: &LiouvillianSpec,
    partitions: &[ClusterPartition],
    moments: &MomentModel,
    max_depth: usize,
) -> Result<InvarianceReport, AlgebraError> {
    let mut signatures = vec![signature(spec)?];
    let mut chain = vec![spec.clone()];
    for k in 1..=max_depth {
        let partition = partitions
            .get(k - 1)
            .ok_or(AlgebraError::PartitionChainExhausted(partitions.len()))?;
        let step = reduce_once(chain.last().unwrap(), partition, moments)?;
        signatures.push(signature(&step.spec)?);
        chain.push(step.spec);
        if signatures[k] == signatures[k - 1] {
            let depth = if k == 1 { 0 } else { k };
            return Ok(InvarianceReport {
                depth: Some(depth),
                signatures,
                chain,
            });
        }
    }
    Ok(InvarianceReport {
        depth: None,
        signatures,
        chain,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;
    use crate::system::ParticleSystem;

    fn all_into_one(n: usize) -> ClusterPartition {
        ClusterPartition::new(vec![0; n]).unwrap()
    }

    #[test]
    fn pattern_is_blind_to_names_count_and_scale() {
        let p = Polynomial::from_terms(&["y1", "y2", "y3"], [(vec![0, 2, 0], rat(-7))]);
        let q = Polynomial::univariate("x", &[(2, rat(3))]);
        assert_eq!(canonical_pattern(&p).unwrap(), "a^2");
        assert_eq!(canonical_pattern(&q).unwrap(), "a^2");
    }

    #[test]
    fn pattern_minimizes_over_variable_permutations() {
        let vars = ["y1", "y2"];
        let a = Polynomial::from_terms(&vars, [(vec![2, 1], rat(1))]);
        let b = Polynomial::from_terms(&vars, [(vec![1, 2], rat(1))]);
        assert_eq!(canonical_pattern(&a).unwrap(), "a*b^2");
        assert_eq!(canonical_pattern(&a).unwrap(), canonical_pattern(&b).unwrap());
        let d1 = Polynomial::var(&vars, "y1")
            .unwrap()
            .sub(&Polynomial::var(&vars, "y2").unwrap());
        assert_eq!(canonical_pattern(&d1).unwrap(), "a - b");
        assert_eq!(canonical_pattern(&d1.neg()).unwrap(), "a - b");
    }

    #[test]
    fn too_many_variables_are_refused() {
        let vars = ["a", "b", "c", "d", "e", "f", "g"];
        let p = Polynomial::from_terms(&vars, [(vec![1; 7], rat(1))]);
        assert!(matches!(
            canonical_pattern(&p),
            Err(AlgebraError::PatternTooWide(7))
        ));
    }

    #[test]
    fn kinetic_only_spec_has_empty_signature() {
        let spec = LiouvillianSpec::new(0, vec!["x1".into()], vec![rat(1)]).unwrap();
        assert!(signature(&spec).unwrap().is_empty());
    }

    #[test]
    fn signatures_ignore_coupling_and_strength_values() {
        let mk = |k: i64, lam: i64| {
            let system = ParticleSystem::uniform(
                vec![rat(1); 2],
                rat(k),
                rat(lam),
                Polynomial::univariate("s", &[(2, rat(1))]),
                Polynomial::univariate("x", &[(3, rat(1))]),
            );
            LiouvillianSpec::from_system(&system).unwrap()
        };
        assert_eq!(
            signature(&mk(1, 1)).unwrap(),
            signature(&mk(5, -2)).unwrap()
        );
    }

    #[test]
    fn free_particles_are_invariant_from_the_start() {
        let spec = LiouvillianSpec::new(
            0,
            vec!["x1".into(), "x2".into()],
            vec![rat(1), rat(1)],
        )
        .unwrap();
        let parts = vec![all_into_one(2), all_into_one(1)];
        let report =
            find_invariance_depth(&spec, &parts, &MomentModel::uniform(), 5).unwrap();
        assert_eq!(report.depth, Some(0));
    }

    #[test]
    fn harmonic_pair_shape_stabilizes_after_two_reductions() {
        let system = ParticleSystem::uniform(
            vec![rat(1); 2],
            rat(1),
            rat(0),
            Polynomial::univariate("s", &[(2, rat(1))]),
            Polynomial::univariate("x", &[(1, rat(0))]),
        );
        let spec = LiouvillianSpec::from_system(&system).unwrap();
        let parts = vec![all_into_one(2), all_into_one(1), all_into_one(1)];
        let report =
            find_invariance_depth(&spec, &parts, &MomentModel::uniform(), 5).unwrap();
        assert_eq!(report.depth, Some(2));
        // the pair interaction is internal after the first clustering
        assert!(report.signatures[1].is_empty());
    }

    #[test]
    fn cubic_external_shape_stabilizes_after_three_reductions() {
        let system = ParticleSystem::uniform(
            vec![rat(1)],
            rat(0),
            rat(1),
            Polynomial::univariate("s", &[(2, rat(1))]),
            Polynomial::univariate("x", &[(3, rat(1))]),
        );
        let spec = LiouvillianSpec::from_system(&system).unwrap();
        let parts = vec![all_into_one(1); 5];
        let report =
            find_invariance_depth(&spec, &parts, &MomentModel::uniform(), 5).unwrap();
        assert_eq!(report.depth, Some(3));
        // the cascade: {a^3} -> {a^3, a^2} -> {a^3, a^2, a} -> stable
        assert_eq!(report.signatures[0].len(), 1);
        assert_eq!(report.signatures[1].len(), 2);
        assert_eq!(report.signatures[2].len(), 3);
        assert_eq!(report.signatures[3], report.signatures[2]);
    }

    #[test]
    fn exhausted_partition_chain_is_an_error() {
        let system = ParticleSystem::uniform(
            vec![rat(1)],
            rat(0),
            rat(1),
            Polynomial::univariate("s", &[(2, rat(1))]),
            Polynomial::univariate("x", &[(3, rat(1))]),
        );
        let spec = LiouvillianSpec::from_system(&system).unwrap();
        let parts = vec![all_into_one(1)];
        assert!(matches!(
            find_invariance_depth(&spec, &parts, &MomentModel::uniform(), 5),
            Err(AlgebraError::PartitionChainExhausted(1))
        ));
    }
}
