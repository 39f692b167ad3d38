//! Validity diagnostics for the truncated phase-space evolution.
//!
//! Two grid-max ratios compare the classical transport terms against the ħ²
//! corrections they dominate when the truncation is trustworthy:
//!
//!   classical  = max |V′ ∂_p W|      / ( ħ² max |V‴ ∂³_p W| ),
//!   mesoscopic = max |(V″)² ∂²_p W| / ( ħ² max |V″ V⁗ ∂⁴_p W| ).
//!
//! A large ratio means the correction is negligible next to the transport
//! term of the same bracket family; when the correction vanishes identically
//! (harmonic potentials for both, cubic for the mesoscopic one) the ratio is
//! reported as [`ValidityRatio::Exact`].
//!
//! The boundary check measures the far-off-diagonal content of a density
//! matrix: max |ρ[a, b]| over the outermost separation shell
//! |a − b| ≥ ⌈0.9·(M−1)⌉.  Integrating the transform by parts in x assumes
//! this correlation tail vanishes; localized packets satisfy it, extended
//! standing waves do not, and position dephasing restores it at a rate set
//! by the largest generator gap.

use meso_algebra::Polynomial;
use meso_quantum::DensityMatrix;

use crate::error::{Result, WignerError};
use crate::field::WignerField;
use crate::stencil;

/// Far-off-diagonal mass above this fails the boundary check.
pub const BOUNDARY_DECAY_THRESHOLD: f64 = 1e-6;

/// A dominance ratio: `Exact` when the correction term is identically zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ValidityRatio {
    /// The correction vanishes identically; the truncation is exact.
    Exact,
    /// max |transport| / max |ħ²·correction|.
    Finite(f64),
}

impl ValidityRatio {
    /// The ratio as a float, mapping `Exact` to +∞.
    pub fn as_f64(&self) -> f64 {
        match self {
            ValidityRatio::Exact => f64::INFINITY,
            ValidityRatio::Finite(r) => *r,
        }
    }
}

/// Grid-max dominance ratios of the two truncation conditions.
#[derive(Debug, Clone, Copy)]
pub struct SemiclassicalRatios {
    /// |V′ ∂_p W| against ħ²|V‴ ∂³_p W|.
    pub classical: ValidityRatio,
    /// |(V″)² ∂²_p W| against ħ²|V″ V⁗ ∂⁴_p W|.
    pub mesoscopic: ValidityRatio,
}

fn sample(poly: &Polynomial, x: f64) -> f64 {
    let point = vec![x; poly.vars().len()];
    poly.eval_f64(&point)
}

/// Evaluate both dominance ratios for a field under a single-coordinate
/// polynomial potential at Planck constant `hbar`.
pub fn semiclassical_ratios(
    w: &WignerField,
    v: &Polynomial,
    hbar: f64,
) -> Result<SemiclassicalRatios> {
    let used = v.used_vars();
    if used.len() > 1 {
        return Err(WignerError::InvalidOperator(format!(
            "potential must depend on one coordinate, found {}",
            used.join(", ")
        )));
    }
    if !(hbar.is_finite() && hbar >= 0.0) {
        return Err(WignerError::BadHbar(hbar));
    }
    let chain: Vec<Polynomial> = match used.first() {
        Some(name) => {
            let mut c = vec![v.derivative(name).expect("name comes from used_vars")];
            for _ in 0..3 {
                let next = c.last().unwrap().derivative(name).expect("same variable list");
                c.push(next);
            }
            c
        }
        None => (0..4).map(|_| Polynomial::zero(v.vars())).collect(),
    };

    let grid = w.grid();
    let k = grid.len();
    let dp = grid.dp();
    let data = w.values();
    let h2 = hbar * hbar;

    let (mut lhs_c, mut rhs_c) = (0.0f64, 0.0f64);
    let (mut lhs_m, mut rhs_m) = (0.0f64, 0.0f64);
    let mut row = vec![0.0; k];
    for s in 0..k {
        let x = grid.x(s);
        let v1 = sample(&chain[0], x);
        let v2 = sample(&chain[1], x);
        let v3 = sample(&chain[2], x);
        let v4 = sample(&chain[3], x);
        for (j, slot) in row.iter_mut().enumerate() {
            *slot = data[[s, j]];
        }
        for j in 3..k - 3 {
            lhs_c = lhs_c.max((v1 * stencil::d1(&row, j, dp)).abs());
            rhs_c = rhs_c.max((h2 * v3 * stencil::d3(&row, j, dp)).abs());
            lhs_m = lhs_m.max((v2 * v2 * stencil::d2(&row, j, dp)).abs());
            rhs_m = rhs_m.max((h2 * v2 * v4 * stencil::d4(&row, j, dp)).abs());
        }
    }

    let ratio = |lhs: f64, rhs: f64| {
        if rhs == 0.0 {
            ValidityRatio::Exact
        } else {
            ValidityRatio::Finite(lhs / rhs)
        }
    };
    Ok(SemiclassicalRatios {
        classical: ratio(lhs_c, rhs_c),
        mesoscopic: ratio(lhs_m, rhs_m),
    })
}

/// Result of the far-off-diagonal decay check.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryDecay {
    /// Largest |ρ[a, b]| with |a − b| on the outermost shell.
    pub max_offdiagonal: f64,
    /// Smallest separation |a − b| included in the shell.
    pub shell_start: usize,
    /// True when the tail is below [`BOUNDARY_DECAY_THRESHOLD`].
    pub pass: bool,
}

/// Measure the far-off-diagonal tail of a density matrix.
pub fn boundary_decay_check(rho: &DensityMatrix) -> BoundaryDecay {
    let m = rho.basis().len();
    let shell_start = ((0.9 * (m - 1) as f64).ceil() as usize).max(1);
    let data = rho.data();
    let mut worst = 0.0f64;
    for a in 0..m {
        for b in 0..m {
            if a.abs_diff(b) >= shell_start {
                worst = worst.max(data[[a, b]].norm());
            }
        }
    }
    BoundaryDecay {
        max_offdiagonal: worst,
        shell_start,
        pass: worst <= BOUNDARY_DECAY_THRESHOLD,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::WignerGrid;
    use meso_algebra::{rat, ratio};
    use meso_quantum::GridBasis;

    fn standard_blob(grid: WignerGrid) -> WignerField {
        WignerField::from_fn(grid, |x, p| (-(x * x + p * p)).exp() / std::f64::consts::PI)
    }

    #[test]
    fn harmonic_potential_makes_both_conditions_exact() {
        let grid = WignerGrid::new(41, -5.0, 5.0, 1.0).unwrap();
        let w = standard_blob(grid);
        let v = Polynomial::univariate("x1", &[(2, ratio(1, 2))]);
        let r = semiclassical_ratios(&w, &v, 0.1).unwrap();
        assert_eq!(r.classical, ValidityRatio::Exact);
        assert_eq!(r.mesoscopic, ValidityRatio::Exact);
        assert!(r.classical.as_f64().is_infinite());
    }

    #[test]
    fn cubic_potential_is_exact_only_for_the_mesoscopic_condition() {
        let grid = WignerGrid::new(41, -5.0, 5.0, 1.0).unwrap();
        let w = standard_blob(grid);
        let v = Polynomial::univariate("x1", &[(3, rat(1))]);
        let r = semiclassical_ratios(&w, &v, 0.1).unwrap();
        assert!(matches!(r.classical, ValidityRatio::Finite(f) if f.is_finite() && f > 0.0));
        assert_eq!(r.mesoscopic, ValidityRatio::Exact);
    }

    #[test]
    fn localized_packet_passes_the_decay_check() {
        let basis = GridBasis::new(64, -8.0, 8.0).unwrap();
        let rho = DensityMatrix::gaussian_packet(basis, 0.0, 0.0, 1.0, 1.0).unwrap();
        let check = boundary_decay_check(&rho);
        assert!(check.pass, "tail {:e} at shell {}", check.max_offdiagonal, check.shell_start);
        assert_eq!(check.shell_start, 57);
    }

    #[test]
    fn standing_wave_fails_the_decay_check() {
        let basis = GridBasis::new(64, -8.0, 8.0).unwrap();
        let rho = DensityMatrix::sine_state(basis, 1.1).unwrap();
        let check = boundary_decay_check(&rho);
        assert!(!check.pass, "tail {:e} unexpectedly small", check.max_offdiagonal);
        assert!(check.max_offdiagonal > 1e-3);
    }
}
