//! Density matrices on a position grid.
//!
//! A state is an M x M complex matrix rho[i][j] ~ rho(x_i, x_j) with the
//! quadrature weight dx folded into every trace-like sum:
//!
//!   tr rho        = sum_i rho_ii * dx            = 1
//!   tr rho^2      = sum_ij |rho_ij|^2 * dx^2     (purity, 1 for pure states)
//!   <x>           = sum_i x_i rho_ii * dx
//!   <p^2>         = -hbar^2 sum_i (d^2_x rho)(x_i, x_i) * dx  (central stencil)
//!
//! Physical states are Hermitian, unit-trace, and positive semidefinite;
//! `validate` checks those invariants at the tolerances used by the
//! evolution monitors (trace 1e-10, hermiticity 1e-12, min eigenvalue -1e-8
//! on the probability scale, i.e. eigenvalues of rho*dx).

use nalgebra::{Complex, DMatrix};
use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{QuantumError, Result};
use crate::grid::GridBasis;

/// Mixed state over a [`GridBasis`].
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    basis: GridBasis,
    data: Array2<Complex64>,
}

/// Scalar coherence diagnostics of a state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceMetrics {
    /// Sum of |rho_ij| over all off-diagonal entries.
    pub offdiag_l1: f64,
    /// tr rho^2 with grid weights; 1 for pure states, 1/M for maximally mixed.
    pub purity: f64,
    /// Smallest eigenvalue of rho*dx (probability scale).
    pub min_eigenvalue: f64,
}

impl DensityMatrix {
    /// Wrap an existing matrix; the shape must match the grid.
    pub fn from_matrix(basis: GridBasis, data: Array2<Complex64>) -> Result<Self> {
        if data.nrows() != basis.len() || data.ncols() != basis.len() {
            return Err(QuantumError::DimensionMismatch {
                expected: basis.len(),
                found: data.nrows().max(data.ncols()),
            });
        }
        Ok(DensityMatrix { basis, data })
    }

    /// Pure state rho = psi psi^dagger; `psi` is normalized internally so
    /// that sum |psi_i|^2 dx = 1.
    pub fn from_wavefunction(basis: GridBasis, psi: &Array1<Complex64>) -> Result<Self> {
        if psi.len() != basis.len() {
            return Err(QuantumError::DimensionMismatch {
                expected: basis.len(),
                found: psi.len(),
            });
        }
        let norm2: f64 = psi.iter().map(|c| c.norm_sqr()).sum::<f64>() * basis.dx();
        if !(norm2 > 1e-300) {
            return Err(QuantumError::BadState(
                "wavefunction has zero norm".to_string(),
            ));
        }
        let scale = 1.0 / norm2.sqrt();
        let m = basis.len();
        let mut data = Array2::zeros((m, m));
        for i in 0..m {
            for j in 0..m {
                data[[i, j]] = psi[i] * psi[j].conj() * scale * scale;
            }
        }
        Ok(DensityMatrix { basis, data })
    }

    /// Gaussian wave packet centred at `x0` with mean momentum `p0` and
    /// position spread `sigma` (standard deviation of x).
    pub fn gaussian_packet(
        basis: GridBasis,
        x0: f64,
        p0: f64,
        sigma: f64,
        hbar: f64,
    ) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(QuantumError::BadState(format!(
                "packet width must be positive, got {sigma}"
            )));
        }
        if !(hbar > 0.0) {
            return Err(QuantumError::BadHbar(hbar));
        }
        let psi = gaussian_amplitudes(&basis, x0, p0, sigma, hbar);
        Self::from_wavefunction(basis, &psi)
    }

    /// Equal-weight coherent superposition of two Gaussian packets, the
    /// standard "cat" initial condition for decoherence runs.
    #[allow(clippy::too_many_arguments)]
    pub fn superposed_packets(
        basis: GridBasis,
        x1: f64,
        x2: f64,
        p0: f64,
        sigma: f64,
        hbar: f64,
    ) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(QuantumError::BadState(format!(
                "packet width must be positive, got {sigma}"
            )));
        }
        if !(hbar > 0.0) {
            return Err(QuantumError::BadHbar(hbar));
        }
        let a = gaussian_amplitudes(&basis, x1, p0, sigma, hbar);
        let b = gaussian_amplitudes(&basis, x2, p0, sigma, hbar);
        let psi = &a + &b;
        Self::from_wavefunction(basis, &psi)
    }

    /// Standing wave psi ~ sin(k (x - x_min)): an extended state whose
    /// coherences reach the corners of the (x, x') square.
    pub fn sine_state(basis: GridBasis, k: f64) -> Result<Self> {
        let psi = Array1::from_iter(
            basis
                .points()
                .iter()
                .map(|&x| Complex64::new((k * (x - basis.x_min())).sin(), 0.0)),
        );
        Self::from_wavefunction(basis, &psi)
    }

    /// Maximally mixed state rho = 1/(M dx).
    pub fn maximally_mixed(basis: GridBasis) -> Self {
        let m = basis.len();
        let fill = Complex64::new(1.0 / (m as f64 * basis.dx()), 0.0);
        DensityMatrix {
            basis,
            data: Array2::from_elem((m, m), Complex64::new(0.0, 0.0))
                + Array2::from_diag_elem(m, fill),
        }
    }

    /// Two-point mixture on grid points `i` and `j` with coherence `c`
    /// (c = 1 reproduces the pure superposition, c = 0 the classical mix).
    pub fn two_point_state(basis: GridBasis, i: usize, j: usize, c: f64) -> Result<Self> {
        let m = basis.len();
        if i >= m || j >= m || i == j {
            return Err(QuantumError::BadState(format!(
                "two-point state needs distinct in-range indices, got {i}, {j}"
            )));
        }
        if !(-1.0..=1.0).contains(&c) {
            return Err(QuantumError::BadState(format!(
                "coherence weight must lie in [-1, 1], got {c}"
            )));
        }
        let w = Complex64::new(0.5 / basis.dx(), 0.0);
        let mut data = Array2::zeros((m, m));
        data[[i, i]] = w;
        data[[j, j]] = w;
        data[[i, j]] = w * c;
        data[[j, i]] = w * c;
        Ok(DensityMatrix { basis, data })
    }

    /// Grid the state lives on.
    pub fn basis(&self) -> GridBasis {
        self.basis
    }

    /// Raw matrix entries.
    pub fn data(&self) -> &Array2<Complex64> {
        &self.data
    }

    /// Mutable matrix entries (evolution kernels use this).
    pub fn data_mut(&mut self) -> &mut Array2<Complex64> {
        &mut self.data
    }

    /// tr rho = sum_i rho_ii dx (real part).
    pub fn trace(&self) -> f64 {
        self.data.diag().iter().map(|c| c.re).sum::<f64>() * self.basis.dx()
    }

    /// Largest |rho_ij - conj(rho_ji)| entry: 0 for exactly Hermitian states.
    pub fn hermiticity_residue(&self) -> f64 {
        let m = self.basis.len();
        let mut worst = 0.0f64;
        for i in 0..m {
            for j in i..m {
                let r = (self.data[[i, j]] - self.data[[j, i]].conj()).norm();
                worst = worst.max(r);
            }
        }
        worst
    }

    /// Replace rho by its Hermitian part (rho + rho^dagger)/2.
    pub fn hermitize(&mut self) {
        let m = self.basis.len();
        for i in 0..m {
            for j in i..m {
                let avg = 0.5 * (self.data[[i, j]] + self.data[[j, i]].conj());
                self.data[[i, j]] = avg;
                self.data[[j, i]] = avg.conj();
            }
        }
    }

    /// Eigenvalues of rho*dx in ascending order (they sum to the trace).
    pub fn probability_spectrum(&self) -> Vec<f64> {
        let m = self.basis.len();
        let dx = self.basis.dx();
        let mat = DMatrix::from_fn(m, m, |i, j| {
            let c = self.data[[i, j]] * dx;
            Complex::new(c.re, c.im)
        });
        let mut eigs: Vec<f64> = mat.symmetric_eigen().eigenvalues.iter().copied().collect();
        eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        eigs
    }

    /// Smallest eigenvalue of rho*dx.
    pub fn min_eigenvalue(&self) -> f64 {
        self.probability_spectrum()[0]
    }

    /// Unit-eigenvalue decomposition: returns (weight, psi) for the largest
    /// eigenvalue, with psi normalized so sum |psi_i|^2 dx = 1.
    pub fn principal_component(&self) -> (f64, Array1<Complex64>) {
        let m = self.basis.len();
        let dx = self.basis.dx();
        let mat = DMatrix::from_fn(m, m, |i, j| {
            let c = self.data[[i, j]] * dx;
            Complex::new(c.re, c.im)
        });
        let eig = mat.symmetric_eigen();
        let mut top = 0;
        for k in 1..m {
            if eig.eigenvalues[k] > eig.eigenvalues[top] {
                top = k;
            }
        }
        let col = eig.eigenvectors.column(top);
        let scale = 1.0 / dx.sqrt();
        let psi = Array1::from_iter(col.iter().map(|c| Complex64::new(c.re, c.im) * scale));
        (eig.eigenvalues[top], psi)
    }

    /// tr rho^2 = sum_ij |rho_ij|^2 dx^2.
    pub fn purity(&self) -> f64 {
        let dx = self.basis.dx();
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>() * dx * dx
    }

    /// l1 coherence: sum of |rho_ij| over i != j.
    pub fn offdiag_l1(&self) -> f64 {
        let m = self.basis.len();
        let mut s = 0.0;
        for i in 0..m {
            for j in 0..m {
                if i != j {
                    s += self.data[[i, j]].norm();
                }
            }
        }
        s
    }

    /// Position density rho(x_i, x_i) (real part).
    pub fn position_density(&self) -> Vec<f64> {
        self.data.diag().iter().map(|c| c.re).collect()
    }

    /// <x> under the grid quadrature.
    pub fn expectation_x(&self) -> f64 {
        let dx = self.basis.dx();
        self.data
            .diag()
            .iter()
            .enumerate()
            .map(|(i, c)| self.basis.x(i) * c.re)
            .sum::<f64>()
            * dx
    }

    /// <p^2> via the hard-wall central second-difference stencil.
    pub fn expectation_p2(&self, hbar: f64) -> f64 {
        let m = self.basis.len();
        let dx = self.basis.dx();
        let mut s = 0.0;
        for i in 0..m {
            let up = if i + 1 < m {
                self.data[[i + 1, i]]
            } else {
                Complex64::new(0.0, 0.0)
            };
            let down = if i > 0 {
                self.data[[i - 1, i]]
            } else {
                Complex64::new(0.0, 0.0)
            };
            let second = (up - 2.0 * self.data[[i, i]] + down) / (dx * dx);
            s += -(hbar * hbar) * second.re;
        }
        s * dx
    }

    /// All three scalar coherence diagnostics at once.
    pub fn coherence_metrics(&self) -> CoherenceMetrics {
        CoherenceMetrics {
            offdiag_l1: self.offdiag_l1(),
            purity: self.purity(),
            min_eigenvalue: self.min_eigenvalue(),
        }
    }

    /// Check the physical-state invariants: unit trace to 1e-10, hermiticity
    /// to 1e-12, and positivity to -1e-8 on the probability scale.
    pub fn validate(&self) -> Result<()> {
        let tr = self.trace();
        if (tr - 1.0).abs() > 1e-10 {
            return Err(QuantumError::BadState(format!(
                "trace deviates from 1 by {:.3e}",
                tr - 1.0
            )));
        }
        let herm = self.hermiticity_residue();
        if herm > 1e-12 {
            return Err(QuantumError::BadState(format!(
                "hermiticity residue {herm:.3e} exceeds 1e-12"
            )));
        }
        let min_eig = self.min_eigenvalue();
        if min_eig < -1e-8 {
            return Err(QuantumError::BadState(format!(
                "negative eigenvalue {min_eig:.3e} below -1e-8"
            )));
        }
        Ok(())
    }

    /// Frobenius norm of the raw matrix (no grid weights); used by the
    /// divergence guard.
    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }
}

fn gaussian_amplitudes(
    basis: &GridBasis,
    x0: f64,
    p0: f64,
    sigma: f64,
    hbar: f64,
) -> Array1<Complex64> {
    Array1::from_iter(basis.points().iter().map(|&x| {
        let d = x - x0;
        let mag = (-d * d / (4.0 * sigma * sigma)).exp();
        let phase = p0 * d / hbar;
        Complex64::new(0.0, phase).exp() * mag
    }))
}

/// Convenience wrapper mirroring [`DensityMatrix::coherence_metrics`].
pub fn coherence_metrics(rho: &DensityMatrix) -> CoherenceMetrics {
    rho.coherence_metrics()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    fn basis() -> GridBasis {
        GridBasis::new(64, -8.0, 8.0).unwrap()
    }

    #[test]
    fn gaussian_packet_is_a_valid_pure_state() {
        let rho = DensityMatrix::gaussian_packet(basis(), 0.0, 0.0, 1.0, 1.0).unwrap();
        rho.validate().unwrap();
        assert_relative_eq!(rho.trace(), 1.0, epsilon = 1e-12);
        assert_relative_eq!(rho.purity(), 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(rho.expectation_x(), 0.0, epsilon = 1e-12);
    }

    #[test]
    fn packet_momentum_spread_matches_minimum_uncertainty() {
        // For a Gaussian with position spread sigma, <p^2> = p0^2 + hbar^2/(4 sigma^2).
        // The second-difference estimator is 2nd order in dx, so the error
        // drops ~4x when the grid is refined 2x.
        let hbar = 1.0;
        let sigma = 0.7;
        let p0 = 0.9;
        let expected = p0 * p0 + hbar * hbar / (4.0 * sigma * sigma);
        let err_at = |m: usize| -> f64 {
            let g = GridBasis::new(m, -8.0, 8.0).unwrap();
            let rho = DensityMatrix::gaussian_packet(g, 0.0, p0, sigma, hbar).unwrap();
            (rho.expectation_p2(hbar) - expected).abs() / expected
        };
        let coarse = err_at(96);
        let fine = err_at(192);
        assert!(fine < 5e-3, "relative error {fine:.3e} at dx ~ 0.084");
        let ratio = coarse / fine;
        assert!(
            (2.5..=6.0).contains(&ratio),
            "<p^2> stencil should converge at 2nd order, got ratio {ratio:.2}"
        );
    }

    #[test]
    fn maximally_mixed_purity_is_one_over_m() {
        let rho = DensityMatrix::maximally_mixed(basis());
        rho.validate().unwrap();
        assert_relative_eq!(rho.purity(), 1.0 / 64.0, epsilon = 1e-12);
        assert_abs_diff_eq!(rho.offdiag_l1(), 0.0);
    }

    #[test]
    fn spectrum_of_two_point_mixture_matches_coherence_weight() {
        // Eigenvalues of [[1/2, c/2], [c/2, 1/2]] are (1 +- c)/2.
        let rho = DensityMatrix::two_point_state(basis(), 10, 40, 0.6).unwrap();
        let spec = rho.probability_spectrum();
        let top_two = (spec[spec.len() - 1], spec[spec.len() - 2]);
        assert_relative_eq!(top_two.0, 0.8, epsilon = 1e-10);
        assert_relative_eq!(top_two.1, 0.2, epsilon = 1e-10);
        assert_relative_eq!(rho.trace(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn principal_component_recovers_the_pure_state() {
        let rho = DensityMatrix::gaussian_packet(basis(), 1.0, 0.5, 0.8, 1.0).unwrap();
        let (w, psi) = rho.principal_component();
        assert_relative_eq!(w, 1.0, epsilon = 1e-10);
        let rebuilt = DensityMatrix::from_wavefunction(basis(), &psi).unwrap();
        let diff = (&rebuilt.data - &rho.data).iter().map(|c| c.norm()).fold(0.0, f64::max);
        assert!(diff < 1e-10, "principal component should rebuild rho, diff {diff:.3e}");
    }

    #[test]
    fn hermitize_halves_an_antisymmetric_perturbation() {
        let mut rho = DensityMatrix::gaussian_packet(basis(), 0.0, 0.0, 1.0, 1.0).unwrap();
        rho.data_mut()[[3, 5]] += Complex64::new(1e-6, 2e-6);
        assert!(rho.hermiticity_residue() > 1e-7);
        rho.hermitize();
        assert!(rho.hermiticity_residue() < 1e-18);
    }

    #[test]
    fn validate_rejects_badly_scaled_states() {
        let mut rho = DensityMatrix::maximally_mixed(basis());
        *rho.data_mut() *= Complex64::new(1.5, 0.0);
        assert!(rho.validate().is_err());
    }
}
