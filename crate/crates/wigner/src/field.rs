//! Real-valued phase-space fields on the half-step Wigner lattice.
//!
//! A field stores W(X_s, p_j) on the K×K lattice of [`WignerGrid`].  Rows with
//! even s sit on source grid nodes and carry the exact quadratures inherited
//! from the generating density matrix: Σ_j W[2a, j]·Δp reproduces the
//! position density ρ(x_a, x_a) and Σ_a Σ_j W[2a, j]·Δx·Δp reproduces the
//! trace, both to round-off.  Odd rows interpolate between nodes and carry
//! the coherence information needed by the inverse transform.  Values may be
//! negative: negativity is physical and must never be clamped.

use ndarray::Array2;

use crate::error::{Result, WignerError};
use crate::grid::WignerGrid;

/// Largest tolerated drift of the total integral from 1.
pub const MASS_TOLERANCE: f64 = 1e-8;

/// A real phase-space quasidistribution sampled on a [`WignerGrid`].
#[derive(Debug, Clone)]
pub struct WignerField {
    grid: WignerGrid,
    /// data[[s, j]] = W(X_s, p_j); axis 0 is position, axis 1 is momentum.
    data: Array2<f64>,
}

impl WignerField {
    /// Wrap existing values; the array must be K×K for the given lattice.
    pub fn from_values(grid: WignerGrid, data: Array2<f64>) -> Result<Self> {
        let k = grid.len();
        if data.nrows() != k || data.ncols() != k {
            return Err(WignerError::GridMismatch(format!(
                "field shape {}x{} does not match the {k}x{k} lattice",
                data.nrows(),
                data.ncols()
            )));
        }
        Ok(WignerField { grid, data })
    }

    /// Sample a function W(x, p) on the lattice.
    pub fn from_fn(grid: WignerGrid, f: impl Fn(f64, f64) -> f64) -> Self {
        let k = grid.len();
        let data = Array2::from_shape_fn((k, k), |(s, j)| f(grid.x(s), grid.p(j)));
        WignerField { grid, data }
    }

    pub fn grid(&self) -> WignerGrid {
        self.grid
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.data
    }

    pub fn values_mut(&mut self) -> &mut Array2<f64> {
        &mut self.data
    }

    /// Total integral ∫∫ W dx dp by the node-row quadrature
    /// Σ_{even s} Σ_j W·Δx·Δp (equals the source trace exactly for
    /// transformed fields).
    pub fn total_mass(&self) -> f64 {
        let sum: f64 = (0..self.grid.source_len())
            .map(|a| self.data.row(2 * a).sum())
            .sum();
        sum * self.grid.dx_source() * self.grid.dp()
    }

    /// Total integral by the uniform half-step quadrature
    /// Σ_s Σ_j W·(Δx/2)·Δp over all rows.  This is the sum the flux-form
    /// evolution conserves exactly; for smooth transformed states it agrees
    /// with [`Self::total_mass`] to spectral accuracy, but for states with
    /// unresolved coherence structure (e.g. the maximally mixed state, whose
    /// odd rows vanish identically) only the node-row quadrature reproduces
    /// the trace.
    pub fn uniform_mass(&self) -> f64 {
        self.data.sum() * self.grid.x_step() * self.grid.dp()
    }

    /// Position density ∫ W dp on the M source nodes (even rows only).
    pub fn position_marginal(&self) -> Vec<f64> {
        (0..self.grid.source_len())
            .map(|a| self.data.row(2 * a).sum() * self.grid.dp())
            .collect()
    }

    /// Momentum density ∫ W dx over all K momenta (uniform half-step
    /// quadrature over the refined position axis).
    pub fn momentum_marginal(&self) -> Vec<f64> {
        let w = self.grid.x_step();
        (0..self.grid.len())
            .map(|j| self.data.column(j).sum() * w)
            .collect()
    }

    /// Smallest value on the lattice (negative for nonclassical states).
    pub fn min_value(&self) -> f64 {
        self.data.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// Largest |W| on the lattice.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Largest |W| on the outermost ring of lattice cells.
    pub fn boundary_max(&self) -> f64 {
        let k = self.grid.len();
        let mut m = 0.0f64;
        for s in 0..k {
            for j in 0..k {
                if s == 0 || j == 0 || s == k - 1 || j == k - 1 {
                    m = m.max(self.data[[s, j]].abs());
                }
            }
        }
        m
    }

    /// First and second moments ⟨x⟩, ⟨p⟩, ⟨x²⟩, ⟨p²⟩ by the uniform
    /// half-step quadrature, normalized by the same quadrature's mass.
    pub fn moments(&self) -> FieldMoments {
        let k = self.grid.len();
        let (mut m0, mut mx, mut mp, mut mx2, mut mp2) = (0.0, 0.0, 0.0, 0.0, 0.0);
        for s in 0..k {
            let x = self.grid.x(s);
            let row = self.data.row(s);
            let (mut s0, mut s1, mut s2) = (0.0, 0.0, 0.0);
            for j in 0..k {
                let p = self.grid.p(j);
                let v = row[j];
                s0 += v;
                s1 += v * p;
                s2 += v * p * p;
            }
            m0 += s0;
            mx += x * s0;
            mx2 += x * x * s0;
            mp += s1;
            mp2 += s2;
        }
        FieldMoments {
            mean_x: mx / m0,
            mean_p: mp / m0,
            mean_x2: mx2 / m0,
            mean_p2: mp2 / m0,
        }
    }

    /// Check that every value is finite and the total integral is 1 within
    /// [`MASS_TOLERANCE`].
    pub fn validate(&self) -> Result<()> {
        if let Some(v) = self.data.iter().find(|v| !v.is_finite()) {
            return Err(WignerError::BadField(format!("non-finite value {v}")));
        }
        let mass = self.total_mass();
        if (mass - 1.0).abs() > MASS_TOLERANCE {
            return Err(WignerError::BadField(format!(
                "total integral {mass:.12} deviates from 1 by more than {MASS_TOLERANCE:.1e}"
            )));
        }
        Ok(())
    }
}

/// Low-order moments of a phase-space field.
#[derive(Debug, Clone, Copy)]
pub struct FieldMoments {
    pub mean_x: f64,
    pub mean_p: f64,
    pub mean_x2: f64,
    pub mean_p2: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gaussian_field_has_unit_mass_and_matching_moments() {
        // Wide lattice so the quadrature sees the whole blob.
        let grid = WignerGrid::new(65, -8.0, 8.0, 1.0).unwrap();
        let (x0, p0, sx, sp) = (0.5, -0.25, 0.9, 0.7);
        let w = WignerField::from_fn(grid, |x, p| {
            let gx = (-(x - x0).powi(2) / (2.0 * sx * sx)).exp();
            let gp = (-(p - p0).powi(2) / (2.0 * sp * sp)).exp();
            gx * gp / (std::f64::consts::TAU * sx * sp)
        });
        assert_relative_eq!(w.total_mass(), 1.0, epsilon = 1e-10);
        let m = w.moments();
        assert_relative_eq!(m.mean_x, x0, epsilon = 1e-8);
        assert_relative_eq!(m.mean_p, p0, epsilon = 1e-8);
        assert_relative_eq!(m.mean_x2, x0 * x0 + sx * sx, max_relative = 1e-8);
        assert_relative_eq!(m.mean_p2, p0 * p0 + sp * sp, max_relative = 1e-8);
        w.validate().unwrap();
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let grid = WignerGrid::new(4, 0.0, 1.0, 1.0).unwrap();
        let bad = Array2::<f64>::zeros((7, 6));
        assert!(matches!(
            WignerField::from_values(grid, bad),
            Err(WignerError::GridMismatch(_))
        ));
    }
}
