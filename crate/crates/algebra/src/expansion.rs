//! Centre-of-mass substitution and first-order multipolar truncation.
//!
//! `substitute_com` rewrites a polynomial over particle coordinates
//! `x_1..x_N` exactly as a polynomial over cluster coordinates `y_1..y_C`
//! and internal offsets `r_1..r_N` via `x_j = y_α(j) + r_j`.
//!
//! `multipolar_truncate` then splits by total degree in the offsets:
//! degree 0 is the coarse part, degree 1 with nontrivial `y` dependence is
//! the moment-coupled part (one channel per offset variable), and everything
//! else — offset degree ≥ 2, plus terms depending on offsets alone (the
//! purely internal remainder) — is discarded behind a flag.

use std::collections::BTreeMap;

use crate::error::AlgebraError;
use crate::poly::Polynomial;
use crate::system::ClusterPartition;

/// Name of the coarse coordinate of cluster `alpha` (0-based input).
pub(crate) fn com_var(alpha: usize) -> String {
    format!("y{}", alpha + 1)
}

/// Name of the internal offset of particle `j` (0-based input).
pub(crate) fn offset_var(j: usize) -> String {
    format!("r{}", j + 1)
}

/// Replace every particle coordinate by `y_α + r_j`. The result lives over
/// the combined variable list `[y1..yC, r1..rN]`; the substitution is exact.
///
/// The i-th variable of `p` is treated as the coordinate of particle `i`, so
/// the partition must assign exactly `p.vars().len()` particles.
pub fn substitute_com(
    p: &Polynomial,
    partition: &ClusterPartition,
) -> Result<Polynomial, AlgebraError> {
    let n = p.vars().len();
    if partition.len() != n {
        return Err(AlgebraError::PartitionSizeMismatch {
            poly_vars: n,
            assigned: partition.len(),
        });
    }
    let nc = partition.n_clusters();
    let mut vars: Vec<String> = (0..nc).map(com_var).collect();
    vars.extend((0..n).map(offset_var));
    let images: Vec<Polynomial> = (0..n)
        .map(|j| {
            let y = Polynomial::var(&vars, &com_var(partition.cluster_of(j))).unwrap();
            let r = Polynomial::var(&vars, &offset_var(j)).unwrap();
            y.add(&r)
        })
        .collect();
    Ok(p.substitute(&images))
}

/// One first-order coupling channel: the offset variable it multiplies and
/// the coarse-coordinate polynomial in front of it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Channel {
    /// Index of the particle whose offset carries this channel.
    pub particle: usize,
    /// Offset variable name (`r{j+1}`).
    pub r_var: String,
    /// Multiplier polynomial over the coarse variables only.
    pub multiplier: Polynomial,
}

/// Outcome of the first-order multipolar split.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExpansionResult {
    /// Offset-free part, over the coarse variables only.
    pub zeroth: Polynomial,
    /// Channels linear in one offset with genuine coarse dependence,
    /// ordered by particle index.
    pub channels: Vec<Channel>,
    /// True when monomials were discarded: offset degree ≥ 2, or terms
    /// depending on offsets alone (internal interactions within a cluster).
    pub residual_discarded: bool,
}

/// Split a substituted polynomial (over `{y*} ∪ {r*}` as produced by
/// [`substitute_com`]) at first multipolar order. Variables are classified by
/// their `y`/`r` name prefix.
pub fn multipolar_truncate(p: &Polynomial) -> ExpansionResult {
    let vars = p.vars();
    let y_idx: Vec<usize> = (0..vars.len()).filter(|&i| vars[i].starts_with('y')).collect();
    let r_idx: Vec<usize> = (0..vars.len()).filter(|&i| vars[i].starts_with('r')).collect();
    debug_assert_eq!(y_idx.len() + r_idx.len(), vars.len(), "unclassified variable");
    let y_vars: Vec<String> = y_idx.iter().map(|&i| vars[i].clone()).collect();

    let mut zeroth = Polynomial::zero(&y_vars);
    let mut channels: BTreeMap<usize, Polynomial> = BTreeMap::new();
    let mut residual = false;

    for (exps, coeff) in p.terms() {
        let r_deg: u32 = r_idx.iter().map(|&i| exps[i]).sum();
        let y_deg: u32 = y_idx.iter().map(|&i| exps[i]).sum();
        let y_part = || {
            let e: Vec<u32> = y_idx.iter().map(|&i| exps[i]).collect();
            Polynomial::from_terms(&y_vars, [(e, coeff.clone())])
        };
        match (r_deg, y_deg) {
            (0, _) => zeroth = zeroth.add(&y_part()),
            (1, yd) if yd >= 1 => {
                let which = r_idx
                    .iter()
                    .position(|&i| exps[i] == 1)
                    .expect("offset of degree one present");
                let entry = channels
                    .entry(which)
                    .or_insert_with(|| Polynomial::zero(&y_vars));
                *entry = entry.add(&y_part());
            }
            // Purely internal terms and higher multipoles are dropped.
            _ => residual = true,
        }
    }

    let channels = channels
        .into_iter()
        .filter(|(_, m)| !m.is_zero())
        .map(|(which, multiplier)| Channel {
            particle: which,
            r_var: offset_var(which),
            multiplier,
        })
        .collect();

    ExpansionResult {
        zeroth,
        channels,
        residual_discarded: residual,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat;

    fn partition(assign: &[usize]) -> ClusterPartition {
        ClusterPartition::new(assign.to_vec()).unwrap()
    }

    #[test]
    fn same_cluster_difference_becomes_pure_offset() {
        // x1 - x2 with both particles in one cluster: y's cancel, r1 - r2 stays
        let vars = ["x1", "x2"];
        let p = Polynomial::var(&vars, "x1")
            .unwrap()
            .sub(&Polynomial::var(&vars, "x2").unwrap());
        let s = substitute_com(&p, &partition(&[0, 0])).unwrap();
        let out_vars = ["y1", "r1", "r2"];
        let expect = Polynomial::var(&out_vars, "r1")
            .unwrap()
            .sub(&Polynomial::var(&out_vars, "r2").unwrap());
        assert_eq!(s, expect);
    }

    #[test]
    fn shifted_cube_splits_into_coarse_channel_and_residual() {
        // x^3 -> y^3 + 3 y^2 r + (3 y r^2 + r^3 discarded)
        let p = Polynomial::univariate("x", &[(3, rat(1))]);
        let s = substitute_com(&p, &partition(&[0])).unwrap();
        let exp = multipolar_truncate(&s);
        assert_eq!(exp.zeroth.canonical_text(), "y1^3");
        assert_eq!(exp.channels.len(), 1);
        assert_eq!(exp.channels[0].r_var, "r1");
        assert_eq!(exp.channels[0].multiplier.canonical_text(), "3*y1^2");
        assert!(exp.residual_discarded);
    }

    #[test]
    fn pair_quadratic_keeps_difference_channels() {
        // (x1 - x2)^2 across two clusters:
        //   zeroth (y1 - y2)^2, channels ±2 (y1 - y2), residual (r1 - r2)^2
        let vars = ["x1", "x2"];
        let d = Polynomial::var(&vars, "x1")
            .unwrap()
            .sub(&Polynomial::var(&vars, "x2").unwrap());
        let p = d.pow(2);
        let exp = multipolar_truncate(&substitute_com(&p, &partition(&[0, 1])).unwrap());
        assert_eq!(exp.zeroth.canonical_text(), "y1^2 - 2*y1*y2 + y2^2");
        assert_eq!(exp.channels.len(), 2);
        assert_eq!(exp.channels[0].multiplier.canonical_text(), "2*y1 - 2*y2");
        assert_eq!(exp.channels[1].multiplier.canonical_text(), "-2*y1 + 2*y2");
        assert!(exp.residual_discarded);
    }

    #[test]
    fn quadratic_within_one_cluster_is_all_residual() {
        // (x1 - x2)^2 inside a single cluster is purely internal
        let vars = ["x1", "x2"];
        let d = Polynomial::var(&vars, "x1")
            .unwrap()
            .sub(&Polynomial::var(&vars, "x2").unwrap());
        let exp = multipolar_truncate(&substitute_com(&d.pow(2), &partition(&[0, 0])).unwrap());
        assert!(exp.zeroth.is_zero());
        assert!(exp.channels.is_empty());
        assert!(exp.residual_discarded);
    }

    #[test]
    fn linear_offset_without_coarse_factor_is_residual() {
        // x -> y + r: the bare r term depends on the offset alone
        let p = Polynomial::univariate("x", &[(1, rat(1))]);
        let exp = multipolar_truncate(&substitute_com(&p, &partition(&[0])).unwrap());
        assert_eq!(exp.zeroth.canonical_text(), "y1");
        assert!(exp.channels.is_empty());
        assert!(exp.residual_discarded);
    }

    #[test]
    fn truncation_is_exact_when_nothing_is_discarded() {
        // x1 * x2 across clusters: y1 y2 + y1 r2 + y2 r1 + (r1 r2 residual)
        let vars = ["x1", "x2"];
        let p = Polynomial::var(&vars, "x1")
            .unwrap()
            .mul(&Polynomial::var(&vars, "x2").unwrap());
        let exp = multipolar_truncate(&substitute_com(&p, &partition(&[0, 1])).unwrap());
        assert_eq!(exp.zeroth.canonical_text(), "y1*y2");
        assert_eq!(exp.channels[0].multiplier.canonical_text(), "y2");
        assert_eq!(exp.channels[1].multiplier.canonical_text(), "y1");
        assert!(exp.residual_discarded);
    }
}
