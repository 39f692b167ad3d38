//! Phase-space probability densities on cell-centered grids.
//!
//! A field stores cell-average values `rho[i, j] >= 0` whose midpoint
//! quadrature `sum rho dx dp` is the total mass; physical states carry mass
//! one. `PairPhaseField` is the four-dimensional analogue over
//! `(x1, x2, p1, p2)` used by the two-coordinate pair mode.

use ndarray::{Array2, Array4};

use crate::error::{ClassicalError, Result};
use crate::grid::{PairGrid, PhaseGrid};

/// Absolute tolerance on `mass - 1` for a valid probability density.
pub const MASS_TOLERANCE: f64 = 1e-8;
/// Most negative cell value tolerated before a field is rejected.
pub const NEGATIVITY_TOLERANCE: f64 = -1e-12;

/// Probability density over one `(x, p)` plane.
#[derive(Debug, Clone)]
pub struct PhaseSpaceField {
    grid: PhaseGrid,
    data: Array2<f64>,
}

impl PhaseSpaceField {
    /// Wrap explicit cell values; shape must be `(mx, mp)`.
    pub fn from_values(grid: PhaseGrid, data: Array2<f64>) -> Result<Self> {
        if data.dim() != (grid.mx(), grid.mp()) {
            return Err(ClassicalError::GridMismatch(format!(
                "field shape {:?} vs grid {}x{}",
                data.dim(),
                grid.mx(),
                grid.mp()
            )));
        }
        Ok(Self { grid, data })
    }

    /// Normalized Gaussian `exp(-(x-x0)^2/2sx^2 - (p-p0)^2/2sp^2)`.
    pub fn gaussian(grid: PhaseGrid, x0: f64, p0: f64, sx: f64, sp: f64) -> Result<Self> {
        if !(sx > 0.0 && sp > 0.0 && sx.is_finite() && sp.is_finite()) {
            return Err(ClassicalError::BadField(format!(
                "gaussian widths must be positive (got {sx}, {sp})"
            )));
        }
        let mut data = Array2::zeros((grid.mx(), grid.mp()));
        for i in 0..grid.mx() {
            let ex = -0.5 * ((grid.x(i) - x0) / sx).powi(2);
            for j in 0..grid.mp() {
                let ep = -0.5 * ((grid.p(j) - p0) / sp).powi(2);
                data[[i, j]] = (ex + ep).exp();
            }
        }
        let mut field = Self { grid, data };
        let m = field.mass();
        if m <= 0.0 {
            return Err(ClassicalError::BadField(
                "gaussian has no support on this grid".into(),
            ));
        }
        field.data.mapv_inplace(|v| v / m);
        Ok(field)
    }

    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.data
    }

    pub fn values_mut(&mut self) -> &mut Array2<f64> {
        &mut self.data
    }

    /// Midpoint quadrature `sum rho dx dp`.
    pub fn mass(&self) -> f64 {
        self.data.sum() * self.grid.cell_area()
    }

    pub fn min_value(&self) -> f64 {
        self.data.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Largest density on the outermost ring of cells; small values certify
    /// that the box is wide enough for the zero-flux walls to be invisible.
    pub fn boundary_max(&self) -> f64 {
        let (mx, mp) = self.data.dim();
        let mut worst: f64 = 0.0;
        for i in 0..mx {
            for j in 0..mp {
                if i == 0 || j == 0 || i == mx - 1 || j == mp - 1 {
                    worst = worst.max(self.data[[i, j]].abs());
                }
            }
        }
        worst
    }

    /// Quadratic Renyi functional `sum rho^2 dx dp`; conserved by pure
    /// advection, strictly decreased by momentum diffusion.
    pub fn h_function(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>() * self.grid.cell_area()
    }

    /// Probability-density invariants: unit mass, no negative cells, finite.
    pub fn validate(&self) -> Result<()> {
        if self.data.iter().any(|v| !v.is_finite()) {
            return Err(ClassicalError::BadField("non-finite cell value".into()));
        }
        let m = self.mass();
        if (m - 1.0).abs() > MASS_TOLERANCE {
            return Err(ClassicalError::BadField(format!(
                "mass {m} deviates from 1 by more than {MASS_TOLERANCE:e}"
            )));
        }
        let lo = self.min_value();
        if lo < NEGATIVITY_TOLERANCE {
            return Err(ClassicalError::BadField(format!(
                "negative density {lo:e} below {NEGATIVITY_TOLERANCE:e}"
            )));
        }
        Ok(())
    }
}

/// Probability density over `(x1, x2, p1, p2)` for the two-coordinate mode.
#[derive(Debug, Clone)]
pub struct PairPhaseField {
    grid: PairGrid,
    data: Array4<f64>,
}

impl PairPhaseField {
    pub fn from_values(grid: PairGrid, data: Array4<f64>) -> Result<Self> {
        let want = (grid.mx(), grid.mx(), grid.mp(), grid.mp());
        if data.dim() != want {
            return Err(ClassicalError::GridMismatch(format!(
                "field shape {:?} vs grid {:?}",
                data.dim(),
                want
            )));
        }
        Ok(Self { grid, data })
    }

    /// Normalized product of four Gaussians, one per axis.
    pub fn gaussian(
        grid: PairGrid,
        centers: [f64; 4], // (x1, x2, p1, p2)
        widths: [f64; 4],
    ) -> Result<Self> {
        if widths.iter().any(|w| !(*w > 0.0 && w.is_finite())) {
            return Err(ClassicalError::BadField(format!(
                "gaussian widths must be positive (got {widths:?})"
            )));
        }
        let profile = |m: usize, coord: &dyn Fn(usize) -> f64, c: f64, w: f64| -> Vec<f64> {
            (0..m)
                .map(|i| (-0.5 * ((coord(i) - c) / w).powi(2)).exp())
                .collect()
        };
        let gx1 = profile(grid.mx(), &|i| grid.x(i), centers[0], widths[0]);
        let gx2 = profile(grid.mx(), &|i| grid.x(i), centers[1], widths[1]);
        let gp1 = profile(grid.mp(), &|j| grid.p(j), centers[2], widths[2]);
        let gp2 = profile(grid.mp(), &|j| grid.p(j), centers[3], widths[3]);
        let mut data = Array4::zeros((grid.mx(), grid.mx(), grid.mp(), grid.mp()));
        for i1 in 0..grid.mx() {
            for i2 in 0..grid.mx() {
                let gxx = gx1[i1] * gx2[i2];
                for j1 in 0..grid.mp() {
                    let gxp = gxx * gp1[j1];
                    for j2 in 0..grid.mp() {
                        data[[i1, i2, j1, j2]] = gxp * gp2[j2];
                    }
                }
            }
        }
        let mut field = Self { grid, data };
        let m = field.mass();
        if m <= 0.0 {
            return Err(ClassicalError::BadField(
                "gaussian has no support on this grid".into(),
            ));
        }
        field.data.mapv_inplace(|v| v / m);
        Ok(field)
    }

    pub fn grid(&self) -> &PairGrid {
        &self.grid
    }

    pub fn values(&self) -> &Array4<f64> {
        &self.data
    }

    pub fn values_mut(&mut self) -> &mut Array4<f64> {
        &mut self.data
    }

    pub fn mass(&self) -> f64 {
        self.data.sum() * self.grid.cell_volume()
    }

    pub fn min_value(&self) -> f64 {
        self.data.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    /// Mass-normalized expectation of a per-cell weight.
    fn expect(&self, weight: impl Fn(usize, usize, usize, usize) -> f64) -> f64 {
        let mut num = 0.0;
        let mut den = 0.0;
        for ((idx, v), _) in self.data.indexed_iter().zip(std::iter::repeat(())) {
            num += weight(idx.0, idx.1, idx.2, idx.3) * v;
            den += v;
        }
        num / den
    }

    pub fn mean_x(&self, axis: usize) -> f64 {
        self.expect(|i1, i2, _, _| self.grid.x(if axis == 0 { i1 } else { i2 }))
    }

    pub fn mean_p(&self, axis: usize) -> f64 {
        self.expect(|_, _, j1, j2| self.grid.p(if axis == 0 { j1 } else { j2 }))
    }

    /// Relative-momentum spread `<(p1 - p2)^2>`, the mode heated by
    /// difference-coupled diffusion.
    pub fn mean_p_diff_sq(&self) -> f64 {
        self.expect(|_, _, j1, j2| {
            let u = self.grid.p(j1) - self.grid.p(j2);
            u * u
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.data.iter().any(|v| !v.is_finite()) {
            return Err(ClassicalError::BadField("non-finite cell value".into()));
        }
        let m = self.mass();
        if (m - 1.0).abs() > MASS_TOLERANCE {
            return Err(ClassicalError::BadField(format!(
                "mass {m} deviates from 1 by more than {MASS_TOLERANCE:e}"
            )));
        }
        let lo = self.min_value();
        if lo < NEGATIVITY_TOLERANCE {
            return Err(ClassicalError::BadField(format!(
                "negative density {lo:e} below {NEGATIVITY_TOLERANCE:e}"
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gaussian_field_is_a_unit_mass_density() {
        let grid = PhaseGrid::new(64, 64, (-6.0, 6.0), (-6.0, 6.0)).unwrap();
        let f = PhaseSpaceField::gaussian(grid, 0.5, -0.25, 1.0, 0.8).unwrap();
        assert_relative_eq!(f.mass(), 1.0, epsilon = 1e-14);
        assert!(f.min_value() >= 0.0);
        f.validate().unwrap();
        assert!(f.boundary_max() < 1e-6);
    }

    #[test]
    fn shape_mismatch_and_mass_drift_are_rejected() {
        let grid = PhaseGrid::new(8, 8, (-1.0, 1.0), (-1.0, 1.0)).unwrap();
        assert!(PhaseSpaceField::from_values(grid, Array2::zeros((8, 7))).is_err());
        let f = PhaseSpaceField::from_values(grid, Array2::ones((8, 8))).unwrap();
        // mass = 64 * (0.25)^2 = 4, far from 1
        assert!(f.validate().is_err());
    }

    #[test]
    fn pair_gaussian_normalizes_and_reports_relative_momentum() {
        let grid = PairGrid::new(10, 12, (-3.0, 3.0), (-4.0, 4.0)).unwrap();
        let f =
            PairPhaseField::gaussian(grid, [0.2, -0.2, 1.0, -1.0], [0.6, 0.6, 0.7, 0.7]).unwrap();
        assert_relative_eq!(f.mass(), 1.0, epsilon = 1e-13);
        f.validate().unwrap();
        assert_relative_eq!(f.mean_x(0), 0.2, epsilon = 1e-4);
        assert_relative_eq!(f.mean_p(1), -1.0, epsilon = 1e-4);
        // <(p1-p2)^2> = (mu1 - mu2)^2 + var1 + var2 for a product state
        let expected = 4.0 + 0.49 + 0.49;
        assert_relative_eq!(f.mean_p_diff_sq(), expected, max_relative = 1e-3);
    }
}
