//! Grid realization of a single-coordinate evolution operator.
//!
//! For one coordinate x with mass mu, potential V(x), and channels
//! (gamma_k, g_k), the density matrix obeys
//!
//!   d rho/dt = (1/(i hbar)) [H, rho] - sum_k (gamma_k / hbar^2) [g_k, [g_k, rho]]
//!
//! with H = -hbar^2/(2 mu) d^2/dx^2 + V(x).  The kinetic term is the hard-wall
//! central stencil (-1, 2, -1)/dx^2; V and every g_k are diagonal in position,
//! so each right-hand-side piece acts in O(M^2):
//!
//!   [T, rho]_ij = t (rho_{i,j-1} + rho_{i,j+1} - rho_{i-1,j} - rho_{i+1,j}),
//!   [V, rho]_ij = (v_i - v_j) rho_ij,
//!   ([g, [g, rho]])_ij = (g(x_i) - g(x_j))^2 rho_ij,
//!
//! where t = hbar^2/(2 mu dx^2) and out-of-range indices are zero (hard
//! walls).  `KineticMode::Frozen` drops the kinetic term entirely (the
//! infinite-mass limit used by pure-dephasing runs).

use meso_algebra::LiouvillianSpec;
use ndarray::Array2;
use num::ToPrimitive;
use num_complex::Complex64;

use crate::density::DensityMatrix;
use crate::error::{QuantumError, Result};
use crate::grid::GridBasis;

/// Whether the kinetic term enters the Hamiltonian.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KineticMode {
    /// Full dynamics: kinetic + potential.
    Full,
    /// Infinite-mass limit: the Hamiltonian is the bare potential.
    Frozen,
}

/// One double-bracket channel: strength gamma and the diagonal samples of g.
#[derive(Debug, Clone)]
pub struct Channel {
    pub gamma: f64,
    pub g: Vec<f64>,
}

/// Dense grid operators ready for time evolution.
#[derive(Debug, Clone)]
pub struct QuantumOperatorSet {
    basis: GridBasis,
    hbar: f64,
    kinetic: KineticMode,
    /// Hopping amplitude t = hbar^2/(2 mu dx^2); zero in frozen mode.
    hopping: f64,
    potential: Vec<f64>,
    channels: Vec<Channel>,
}

impl QuantumOperatorSet {
    pub fn basis(&self) -> GridBasis {
        self.basis
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    pub fn kinetic_mode(&self) -> KineticMode {
        self.kinetic
    }

    /// Kinetic hopping amplitude hbar^2/(2 mu dx^2) (0 when frozen).
    pub fn hopping(&self) -> f64 {
        self.hopping
    }

    /// Diagonal potential samples V(x_i).
    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    /// Channels (gamma_k, g_k samples).
    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    /// Dense Hamiltonian matrix (real symmetric, stored complex):
    /// 2t + V_i on the diagonal, -t on the first off-diagonals.
    pub fn hamiltonian(&self) -> Array2<Complex64> {
        let m = self.basis.len();
        let mut h = Array2::from_elem((m, m), Complex64::new(0.0, 0.0));
        for i in 0..m {
            h[[i, i]] = Complex64::new(2.0 * self.hopping + self.potential[i], 0.0);
            if i + 1 < m {
                h[[i, i + 1]] = Complex64::new(-self.hopping, 0.0);
                h[[i + 1, i]] = Complex64::new(-self.hopping, 0.0);
            }
        }
        h
    }

    /// Right-hand side of the master equation evaluated at `rho`.
    ///
    /// The commutator part has exactly zero trace and the double-bracket
    /// part vanishes on the diagonal, so the rate matrix is traceless up to
    /// rounding.
    pub fn apply_liouvillian(&self, rho: &DensityMatrix) -> Result<Array2<Complex64>> {
        let m = self.basis.len();
        if rho.basis() != self.basis {
            return Err(QuantumError::DimensionMismatch {
                expected: m,
                found: rho.basis().len(),
            });
        }
        let data = rho.data();
        let zero = Complex64::new(0.0, 0.0);
        let minus_i_over_hbar = Complex64::new(0.0, -1.0 / self.hbar);
        let hb2 = self.hbar * self.hbar;
        let mut rate = Array2::from_elem((m, m), zero);
        for i in 0..m {
            for j in 0..m {
                // [T, rho]: hopping stencil with hard walls.
                let mut comm = zero;
                if self.hopping != 0.0 {
                    let mut s = zero;
                    if j > 0 {
                        s += data[[i, j - 1]];
                    }
                    if j + 1 < m {
                        s += data[[i, j + 1]];
                    }
                    if i > 0 {
                        s -= data[[i - 1, j]];
                    }
                    if i + 1 < m {
                        s -= data[[i + 1, j]];
                    }
                    comm += s * self.hopping;
                }
                // [V, rho]: diagonal commutator.
                comm += data[[i, j]] * (self.potential[i] - self.potential[j]);
                let mut out = comm * minus_i_over_hbar;
                // Channels: -(gamma/hbar^2) (g_i - g_j)^2 rho_ij.
                for ch in &self.channels {
                    let d = ch.g[i] - ch.g[j];
                    out -= data[[i, j]] * (ch.gamma / hb2 * d * d);
                }
                rate[[i, j]] = out;
            }
        }
        Ok(rate)
    }
}

/// Sample a validated single-coordinate operator onto a grid.
pub fn build_operators(
    spec: &LiouvillianSpec,
    basis: GridBasis,
    hbar: f64,
    kinetic: KineticMode,
) -> Result<QuantumOperatorSet> {
    if !(hbar > 0.0 && hbar.is_finite()) {
        return Err(QuantumError::BadHbar(hbar));
    }
    spec.validate()
        .map_err(|e| QuantumError::InvalidOperator(e.to_string()))?;
    if spec.n_coordinates() != 1 {
        return Err(QuantumError::MultiCoordinate(spec.n_coordinates()));
    }
    let mass = spec.masses[0]
        .to_f64()
        .ok_or_else(|| QuantumError::CoefficientOverflow(spec.masses[0].to_string()))?;
    if !(mass > 0.0) {
        return Err(QuantumError::InvalidOperator(format!(
            "mass must be positive, got {mass}"
        )));
    }

    let m = basis.len();
    let dx = basis.dx();
    let xs = basis.points();

    let v_poly = spec.potential_total();
    let potential: Vec<f64> = if v_poly.is_zero() {
        vec![0.0; m]
    } else {
        xs.iter().map(|&x| v_poly.eval_f64(&[x])).collect()
    };

    let hopping = match kinetic {
        KineticMode::Full => hbar * hbar / (2.0 * mass * dx * dx),
        KineticMode::Frozen => 0.0,
    };

    let mut channels = Vec::with_capacity(spec.decoherence.len());
    for term in &spec.decoherence {
        let gamma = term
            .strength
            .to_f64()
            .ok_or_else(|| QuantumError::CoefficientOverflow(term.strength.to_string()))?;
        let g: Vec<f64> = xs.iter().map(|&x| term.generator.eval_f64(&[x])).collect();
        channels.push(Channel { gamma, g });
    }

    Ok(QuantumOperatorSet {
        basis,
        hbar,
        kinetic,
        hopping,
        potential,
        channels,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use meso_algebra::{rat, ratio, single_coordinate_spec, Polynomial};

    fn harmonic_spec() -> LiouvillianSpec {
        // H = p^2/(2m) + x^2/2 with m = 1.
        let mut spec = single_coordinate_spec(rat(1));
        spec.add_potential(Polynomial::univariate("x1", &[(2, ratio(1, 2))]))
            .unwrap();
        spec
    }

    #[test]
    fn kinetic_stencil_is_tridiagonal_with_hard_walls() {
        let spec = single_coordinate_spec(rat(2));
        let basis = GridBasis::new(3, 0.0, 1.0).unwrap();
        let ops = build_operators(&spec, basis, 1.0, KineticMode::Full).unwrap();
        // t = hbar^2/(2 m dx^2) = 1/(2*2*0.25) = 1.
        let h = ops.hamiltonian();
        for i in 0..3 {
            assert_relative_eq!(h[[i, i]].re, 2.0);
        }
        assert_relative_eq!(h[[0, 1]].re, -1.0);
        assert_relative_eq!(h[[1, 2]].re, -1.0);
        assert_relative_eq!(h[[2, 0]].re, 0.0);
        assert!(h.iter().all(|c| c.im == 0.0));
    }

    #[test]
    fn frozen_mode_keeps_only_the_potential() {
        let spec = harmonic_spec();
        let basis = GridBasis::new(5, -2.0, 2.0).unwrap();
        let ops = build_operators(&spec, basis, 1.0, KineticMode::Frozen).unwrap();
        let h = ops.hamiltonian();
        for i in 0..5 {
            for j in 0..5 {
                if i == j {
                    let x = basis.x(i);
                    assert_relative_eq!(h[[i, j]].re, 0.5 * x * x);
                } else {
                    assert_abs_diff_eq!(h[[i, j]].norm(), 0.0);
                }
            }
        }
    }

    #[test]
    fn structured_apply_matches_the_dense_commutator() {
        // The O(M^2) stencil path must agree with a literal dense
        // (-i/hbar)(H rho - rho H) - sum gamma/hbar^2 [g,[g,rho]] evaluation.
        let mut spec = harmonic_spec();
        spec.add_decoherence(ratio(2, 3), Polynomial::univariate("x1", &[(1, rat(1))]))
            .unwrap();
        let basis = GridBasis::new(10, -2.0, 2.0).unwrap();
        let hbar = 0.8;
        let ops = build_operators(&spec, basis, hbar, KineticMode::Full).unwrap();
        let rho = DensityMatrix::superposed_packets(basis, -0.8, 0.8, 0.2, 0.4, hbar).unwrap();
        let fast = ops.apply_liouvillian(&rho).unwrap();

        let h = ops.hamiltonian();
        let hr = h.dot(rho.data());
        let rh = rho.data().dot(&h);
        let mut dense = (hr - rh) * Complex64::new(0.0, -1.0 / hbar);
        for ch in ops.channels() {
            for i in 0..10 {
                for j in 0..10 {
                    let d = ch.g[i] - ch.g[j];
                    dense[[i, j]] -= rho.data()[[i, j]] * (ch.gamma / (hbar * hbar) * d * d);
                }
            }
        }
        let worst = fast
            .iter()
            .zip(dense.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(worst < 1e-12, "stencil/dense mismatch {worst:.3e}");
    }

    #[test]
    fn multi_coordinate_operators_are_rejected() {
        let spec =
            LiouvillianSpec::new(0, vec!["x1".into(), "x2".into()], vec![rat(1), rat(1)]).unwrap();
        let basis = GridBasis::new(4, 0.0, 1.0).unwrap();
        match build_operators(&spec, basis, 1.0, KineticMode::Full) {
            Err(QuantumError::MultiCoordinate(2)) => {}
            other => panic!("expected MultiCoordinate error, got {other:?}"),
        }
    }

    #[test]
    fn nonpositive_hbar_is_rejected() {
        let spec = harmonic_spec();
        let basis = GridBasis::new(4, 0.0, 1.0).unwrap();
        assert!(matches!(
            build_operators(&spec, basis, 0.0, KineticMode::Full),
            Err(QuantumError::BadHbar(_))
        ));
        assert!(matches!(
            build_operators(&spec, basis, -1.0, KineticMode::Full),
            Err(QuantumError::BadHbar(_))
        ));
    }

    #[test]
    fn double_bracket_damps_coherences_by_squared_generator_gap() {
        // Single channel g = x, gamma = 1, frozen kinetic, zero potential:
        // d rho_ij/dt = -(x_i - x_j)^2 rho_ij / hbar^2.
        let mut spec = single_coordinate_spec(rat(1));
        spec.add_decoherence(rat(1), Polynomial::univariate("x1", &[(1, rat(1))]))
            .unwrap();
        let basis = GridBasis::new(4, 0.0, 3.0).unwrap();
        let ops = build_operators(&spec, basis, 1.0, KineticMode::Frozen).unwrap();
        let rho = DensityMatrix::maximally_mixed(basis);
        let mut test_rho = rho.clone();
        test_rho.data_mut()[[0, 3]] = Complex64::new(0.1, 0.0);
        test_rho.data_mut()[[3, 0]] = Complex64::new(0.1, 0.0);
        let rate = ops.apply_liouvillian(&test_rho).unwrap();
        // (x_0 - x_3)^2 = 9, so the corner decays at rate 9 * 0.1.
        assert_relative_eq!(rate[[0, 3]].re, -0.9, epsilon = 1e-12);
        // Diagonal is untouched by a diagonal channel.
        for i in 0..4 {
            assert_abs_diff_eq!(rate[[i, i]].norm(), 0.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn liouvillian_rate_is_traceless() {
        let mut spec = harmonic_spec();
        spec.add_decoherence(ratio(1, 3), Polynomial::univariate("x1", &[(2, rat(1))]))
            .unwrap();
        let basis = GridBasis::new(32, -4.0, 4.0).unwrap();
        let ops = build_operators(&spec, basis, 0.7, KineticMode::Full).unwrap();
        let rho = DensityMatrix::superposed_packets(basis, -1.0, 1.0, 0.3, 0.5, 0.7).unwrap();
        let rate = ops.apply_liouvillian(&rho).unwrap();
        let trace: Complex64 = rate.diag().iter().sum();
        assert_abs_diff_eq!(trace.norm(), 0.0, epsilon = 1e-12);
    }
}
