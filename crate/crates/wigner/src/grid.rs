//! Half-step phase-space lattice conjugate to a position grid.
//!
//! A source grid of M nodes x_i = x_min + i·Δx induces K = 2M−1 midpoints
//! X_s = x_min + s·Δx/2: every pair (x_a, x_b) has its center (x_a+x_b)/2 on
//! this refined axis (antidiagonal index s = a+b).  The separation
//! η = x_b − x_a then takes the values k·Δx with k ≡ s (mod 2), and the
//! conjugate momentum lattice carrying the Fourier dual of η is
//!
//!   p_n = π ħ n / (K Δx),   n = −(M−1), …, M−1,
//!
//! i.e. K momenta with spacing Δp = πħ/(KΔx) spanning ≈ πħ/Δx in total.
//! On this lattice the transform pair is exactly invertible.

use meso_quantum::GridBasis;

use crate::error::{Result, WignerError};

/// Geometry of a Wigner lattice: K = 2M−1 half-step positions crossed with
/// the K conjugate momenta of an M-node source grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WignerGrid {
    source_len: usize,
    x_min: f64,
    x_max: f64,
    hbar: f64,
}

impl WignerGrid {
    /// Lattice induced by an M-node position grid at Planck constant `hbar`.
    pub fn new(source_len: usize, x_min: f64, x_max: f64, hbar: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0) {
            return Err(WignerError::BadHbar(hbar));
        }
        if source_len < 2 {
            return Err(WignerError::GridMismatch(format!(
                "source grid needs at least 2 nodes, got {source_len}"
            )));
        }
        if !(x_min.is_finite() && x_max.is_finite() && x_max > x_min) {
            return Err(WignerError::GridMismatch(format!(
                "position bounds must be finite and increasing, got [{x_min}, {x_max}]"
            )));
        }
        Ok(WignerGrid { source_len, x_min, x_max, hbar })
    }

    /// Lattice conjugate to an existing position basis.
    pub fn from_basis(basis: &GridBasis, hbar: f64) -> Result<Self> {
        Self::new(basis.len(), basis.x_min(), basis.x_max(), hbar)
    }

    /// Number of nodes M of the source position grid.
    pub fn source_len(&self) -> usize {
        self.source_len
    }

    /// Number of lattice slots per axis, K = 2M−1.
    pub fn len(&self) -> usize {
        2 * self.source_len - 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Spacing Δx of the source position grid.
    pub fn dx_source(&self) -> f64 {
        (self.x_max - self.x_min) / (self.source_len - 1) as f64
    }

    /// Spacing of the refined position axis, Δx/2.
    pub fn x_step(&self) -> f64 {
        0.5 * self.dx_source()
    }

    /// Position of lattice slot `s` (s = 0, …, K−1): x_min + s·Δx/2.
    pub fn x(&self, s: usize) -> f64 {
        self.x_min + s as f64 * self.x_step()
    }

    /// Momentum spacing Δp = πħ/(KΔx).
    pub fn dp(&self) -> f64 {
        std::f64::consts::PI * self.hbar / (self.len() as f64 * self.dx_source())
    }

    /// Momentum of lattice column `j` (j = 0, …, K−1): (j − (M−1))·Δp,
    /// symmetric about zero.
    pub fn p(&self, j: usize) -> f64 {
        (j as f64 - (self.source_len - 1) as f64) * self.dp()
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    pub fn hbar(&self) -> f64 {
        self.hbar
    }

    /// All K positions of the refined axis.
    pub fn xs(&self) -> Vec<f64> {
        (0..self.len()).map(|s| self.x(s)).collect()
    }

    /// All K momenta of the conjugate axis.
    pub fn ps(&self) -> Vec<f64> {
        (0..self.len()).map(|j| self.p(j)).collect()
    }

    /// The source position basis this lattice refines.
    pub fn basis(&self) -> GridBasis {
        GridBasis::new(self.source_len, self.x_min, self.x_max)
            .expect("a valid lattice always stores a valid source basis")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn lattice_geometry_refines_the_source_grid() {
        let basis = GridBasis::new(5, -1.0, 1.0).unwrap();
        let grid = WignerGrid::from_basis(&basis, 2.0).unwrap();
        assert_eq!(grid.len(), 9);
        assert_relative_eq!(grid.x_step(), 0.25);
        // Even slots land on source nodes.
        for a in 0..5 {
            assert_relative_eq!(grid.x(2 * a), basis.x(a), epsilon = 1e-14);
        }
        // Momenta are symmetric with conjugate spacing piħ/(KΔx).
        assert_relative_eq!(grid.dp(), std::f64::consts::PI * 2.0 / (9.0 * 0.5));
        assert_relative_eq!(grid.p(4), 0.0);
        assert_relative_eq!(grid.p(0), -grid.p(8));
    }

    #[test]
    fn degenerate_parameters_are_rejected() {
        assert!(WignerGrid::new(4, 0.0, 1.0, 0.0).is_err());
        assert!(WignerGrid::new(4, 0.0, 1.0, f64::NAN).is_err());
        assert!(WignerGrid::new(1, 0.0, 1.0, 1.0).is_err());
        assert!(WignerGrid::new(4, 1.0, 1.0, 1.0).is_err());
    }
}
