//! Discrete phase-space transform pair.
//!
//! For a density matrix ρ on M nodes with spacing Δx the forward map is the
//! discretization of
//!
//!   W(x, p) = (1/h) ∫ dη e^{ipη/ħ} ρ(x − η/2, x + η/2)
//!
//! on the half-step lattice: with K = 2M−1, center slot s = a + b and
//! separation index k = b − a (which shares the parity of s, so η = kΔx
//! advances by 2Δx within a slot)
//!
//!   W[s, n] = (2Δx/h) Σ_k e^{iπnk/K} ρ[(s−k)/2, (s+k)/2],
//!
//! with momenta p_n = πħn/(KΔx), n = −(M−1)…(M−1).  Because the kernel runs
//! over a full set of K half-integer frequencies, the map inverts exactly:
//!
//!   ρ[a, b] = (h/(2ΔxK)) Σ_n e^{−iπnk/K} W[a+b, n].
//!
//! Hermitian input pairs the ±k terms into conjugates, so W is real to
//! round-off; the imaginary residue is checked and then discarded.  The
//! momentum window |p| ≤ πħ(M−1)/(KΔx) is the alias-free band for
//! separations sampled every 2Δx — a wider window would fold spurious
//! mirror images into the outer momentum rows.

use ndarray::Array2;
use num_complex::Complex64;

use meso_quantum::DensityMatrix;

use crate::error::{Result, WignerError};
use crate::field::WignerField;
use crate::grid::WignerGrid;

/// Hermiticity residues above this reject the forward transform.
pub const HERMITICITY_TOLERANCE: f64 = 1e-10;

/// Relative imaginary residue tolerated in the (mathematically real) output.
pub const IMAGINARY_TOLERANCE: f64 = 1e-12;

/// Unit phases e^{iπ m / K} for m = 0…2K−1; the kernel phase for any
/// integer product nk is `table[(nk) mod 2K]`.
fn phase_table(k_slots: usize) -> Vec<Complex64> {
    let period = 2 * k_slots;
    (0..period)
        .map(|m| Complex64::from_polar(1.0, std::f64::consts::PI * m as f64 / k_slots as f64))
        .collect()
}

fn phase_index(nk: i64, period: i64) -> usize {
    nk.rem_euclid(period) as usize
}

/// Forward transform of a Hermitian density matrix into a real phase-space
/// field on the conjugate lattice.
pub fn wigner_forward(rho: &DensityMatrix, hbar: f64) -> Result<WignerField> {
    let residue = rho.hermiticity_residue();
    if residue > HERMITICITY_TOLERANCE {
        return Err(WignerError::NonHermitian(residue));
    }
    let basis = rho.basis();
    let grid = WignerGrid::from_basis(&basis, hbar)?;
    let m = grid.source_len();
    let k_slots = grid.len();
    let table = phase_table(k_slots);
    let period = 2 * k_slots as i64;
    // 2Δx/h = Δx/(πħ)
    let norm = basis.dx() / (std::f64::consts::PI * hbar);
    let data = rho.data();

    let mut out = Array2::<f64>::zeros((k_slots, k_slots));
    let mut max_re = 0.0f64;
    let mut max_im = 0.0f64;
    for s in 0..k_slots {
        let a_lo = s.saturating_sub(m - 1);
        let a_hi = s.min(m - 1);
        for j in 0..k_slots {
            let n = j as i64 - (m - 1) as i64;
            let mut acc = Complex64::new(0.0, 0.0);
            for a in a_lo..=a_hi {
                let b = s - a;
                let k_off = b as i64 - a as i64; // = s − 2a, parity of s
                acc += table[phase_index(n * k_off, period)] * data[[a, b]];
            }
            let w = acc * norm;
            max_re = max_re.max(w.re.abs());
            max_im = max_im.max(w.im.abs());
            out[[s, j]] = w.re;
        }
    }
    let rel_im = max_im / max_re.max(f64::MIN_POSITIVE);
    if rel_im > IMAGINARY_TOLERANCE {
        return Err(WignerError::ComplexResidue(rel_im));
    }
    WignerField::from_values(grid, out)
}

/// Inverse transform back to the source density matrix; exact inverse of
/// [`wigner_forward`] up to round-off.
pub fn wigner_inverse(w: &WignerField, hbar: f64) -> Result<DensityMatrix> {
    let grid = w.grid();
    if (hbar - grid.hbar()).abs() > 1e-12 * grid.hbar() {
        return Err(WignerError::GridMismatch(format!(
            "field lattice was built at hbar = {} but the inverse was requested at {hbar}",
            grid.hbar()
        )));
    }
    let basis = grid.basis();
    let m = grid.source_len();
    let k_slots = grid.len();
    let table = phase_table(k_slots);
    let period = 2 * k_slots as i64;
    // h/(2ΔxK) = πħ/(ΔxK)
    let norm = std::f64::consts::PI * grid.hbar() / (basis.dx() * k_slots as f64);
    let values = w.values();

    let mut rho = Array2::<Complex64>::zeros((m, m));
    for a in 0..m {
        for b in 0..m {
            let s = a + b;
            let k_off = b as i64 - a as i64;
            let mut acc = Complex64::new(0.0, 0.0);
            for j in 0..k_slots {
                let n = j as i64 - (m - 1) as i64;
                acc += table[phase_index(-n * k_off, period)] * values[[s, j]];
            }
            rho[[a, b]] = acc * norm;
        }
    }
    Ok(DensityMatrix::from_matrix(basis, rho)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use meso_quantum::GridBasis;

    fn pseudo_random_hermitian(m: usize) -> Array2<Complex64> {
        // Deterministic fill, Hermitized, diagonally dominated, unit trace.
        let mut a = Array2::<Complex64>::zeros((m, m));
        for i in 0..m {
            for j in 0..m {
                let t = (3.0 * (i * m + j) as f64 + 1.0).sin();
                let u = (7.0 * (i + 2 * j) as f64 + 2.0).cos();
                a[[i, j]] = Complex64::new(t, u);
            }
        }
        let mut h = Array2::<Complex64>::zeros((m, m));
        for i in 0..m {
            for j in 0..m {
                h[[i, j]] = 0.5 * (a[[i, j]] + a[[j, i]].conj());
            }
            h[[i, i]] += Complex64::new(m as f64, 0.0);
        }
        let trace: f64 = (0..m).map(|i| h[[i, i]].re).sum();
        h.mapv(|z| z / trace)
    }

    #[test]
    fn round_trip_is_exact_on_an_arbitrary_hermitian_matrix() {
        let m = 17;
        let basis = GridBasis::new(m, -2.0, 3.0).unwrap();
        let rho = DensityMatrix::from_matrix(basis, pseudo_random_hermitian(m)).unwrap();
        let w = wigner_forward(&rho, 0.7).unwrap();
        let back = wigner_inverse(&w, 0.7).unwrap();
        let mut num = 0.0f64;
        let mut den = 0.0f64;
        for i in 0..m {
            for j in 0..m {
                num += (back.data()[[i, j]] - rho.data()[[i, j]]).norm_sqr();
                den += rho.data()[[i, j]].norm_sqr();
            }
        }
        assert!((num / den).sqrt() < 1e-12, "relative error {:e}", (num / den).sqrt());
        assert_relative_eq!(back.trace(), rho.trace(), epsilon = 1e-12);
    }

    #[test]
    fn node_row_marginals_reproduce_the_position_density_exactly() {
        let m = 21;
        let basis = GridBasis::new(m, -4.0, 4.0).unwrap();
        let rho = DensityMatrix::from_matrix(basis, pseudo_random_hermitian(m)).unwrap();
        let w = wigner_forward(&rho, 1.3).unwrap();
        let marginal = w.position_marginal();
        let density = rho.position_density();
        for a in 0..m {
            assert_relative_eq!(marginal[a], density[a], epsilon = 1e-13);
        }
        assert_relative_eq!(w.total_mass(), rho.trace(), epsilon = 1e-13);
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let m = 8;
        let basis = GridBasis::new(m, 0.0, 1.0).unwrap();
        let mut data = pseudo_random_hermitian(m);
        data[[0, 1]] += Complex64::new(0.0, 1e-6);
        let rho = DensityMatrix::from_matrix(basis, data).unwrap();
        assert!(matches!(
            wigner_forward(&rho, 1.0),
            Err(WignerError::NonHermitian(_))
        ));
    }

    #[test]
    fn inverse_at_a_different_hbar_is_rejected() {
        let basis = GridBasis::new(8, 0.0, 1.0).unwrap();
        let rho = DensityMatrix::maximally_mixed(basis);
        let w = wigner_forward(&rho, 1.0).unwrap();
        assert!(matches!(
            wigner_inverse(&w, 0.5),
            Err(WignerError::GridMismatch(_))
        ));
    }
}
