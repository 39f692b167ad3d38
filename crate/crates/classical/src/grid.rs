//! Cell-centered phase-space grids.
//!
//! A `PhaseGrid` covers the rectangle `[x_min, x_max] x [p_min, p_max]` with
//! `mx * mp` uniform cells; samples live at cell centers
//! `x_i = x_min + (i + 1/2) dx`, which makes the plain sum
//! `sum rho_ij dx dp` a midpoint quadrature of the continuum integral.
//! `PairGrid` is the analogous four-dimensional box for two coordinates.

use crate::error::{ClassicalError, Result};

/// Uniform cell-centered grid over one position and one momentum axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhaseGrid {
    mx: usize,
    mp: usize,
    x_min: f64,
    x_max: f64,
    p_min: f64,
    p_max: f64,
}

fn check_axis(label: &str, m: usize, lo: f64, hi: f64) -> Result<()> {
    if m < 2 || !lo.is_finite() || !hi.is_finite() || hi <= lo {
        return Err(ClassicalError::BadGrid(format!(
            "{label}: {m} cells over [{lo}, {hi}]"
        )));
    }
    Ok(())
}

impl PhaseGrid {
    pub fn new(mx: usize, mp: usize, x: (f64, f64), p: (f64, f64)) -> Result<Self> {
        check_axis("x axis", mx, x.0, x.1)?;
        check_axis("p axis", mp, p.0, p.1)?;
        Ok(Self {
            mx,
            mp,
            x_min: x.0,
            x_max: x.1,
            p_min: p.0,
            p_max: p.1,
        })
    }

    pub fn mx(&self) -> usize {
        self.mx
    }

    pub fn mp(&self) -> usize {
        self.mp
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.mx as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / self.mp as f64
    }

    /// Center of position cell `i`.
    pub fn x(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx()
    }

    /// Center of momentum cell `j`.
    pub fn p(&self, j: usize) -> f64 {
        self.p_min + (j as f64 + 0.5) * self.dp()
    }

    pub fn x_bounds(&self) -> (f64, f64) {
        (self.x_min, self.x_max)
    }

    pub fn p_bounds(&self) -> (f64, f64) {
        (self.p_min, self.p_max)
    }

    /// Area of one cell, the weight of the midpoint quadrature.
    pub fn cell_area(&self) -> f64 {
        self.dx() * self.dp()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.mx).map(|i| self.x(i)).collect()
    }

    pub fn ps(&self) -> Vec<f64> {
        (0..self.mp).map(|j| self.p(j)).collect()
    }
}

/// Uniform cell-centered grid over two positions and two momenta.
///
/// Both position axes share one geometry and both momentum axes share
/// another, so difference couplings can use exact diagonal stencils.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairGrid {
    mx: usize,
    mp: usize,
    x_min: f64,
    x_max: f64,
    p_min: f64,
    p_max: f64,
}

impl PairGrid {
    pub fn new(mx: usize, mp: usize, x: (f64, f64), p: (f64, f64)) -> Result<Self> {
        check_axis("position axes", mx, x.0, x.1)?;
        check_axis("momentum axes", mp, p.0, p.1)?;
        Ok(Self {
            mx,
            mp,
            x_min: x.0,
            x_max: x.1,
            p_min: p.0,
            p_max: p.1,
        })
    }

    pub fn mx(&self) -> usize {
        self.mx
    }

    pub fn mp(&self) -> usize {
        self.mp
    }

    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / self.mx as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / self.mp as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        self.x_min + (i as f64 + 0.5) * self.dx()
    }

    pub fn p(&self, j: usize) -> f64 {
        self.p_min + (j as f64 + 0.5) * self.dp()
    }

    pub fn x_bounds(&self) -> (f64, f64) {
        (self.x_min, self.x_max)
    }

    pub fn p_bounds(&self) -> (f64, f64) {
        (self.p_min, self.p_max)
    }

    /// Four-volume of one cell.
    pub fn cell_volume(&self) -> f64 {
        let dx = self.dx();
        let dp = self.dp();
        dx * dx * dp * dp
    }

    /// Streaming velocities `p_j / mass` along one momentum axis.
    pub fn velocities(&self, mass: f64) -> Vec<f64> {
        (0..self.mp).map(|j| self.p(j) / mass).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn cell_centers_tile_the_box_symmetrically() {
        let g = PhaseGrid::new(4, 8, (-2.0, 2.0), (-4.0, 4.0)).unwrap();
        assert_relative_eq!(g.dx(), 1.0);
        assert_relative_eq!(g.dp(), 1.0);
        assert_relative_eq!(g.x(0), -1.5);
        assert_relative_eq!(g.x(3), 1.5);
        // midpoint symmetry: centers of a symmetric grid sum to zero exactly
        assert_relative_eq!(g.xs().iter().sum::<f64>(), 0.0, epsilon = 1e-14);
        assert_relative_eq!(g.ps().iter().sum::<f64>(), 0.0, epsilon = 1e-14);
    }

    #[test]
    fn degenerate_axes_are_rejected() {
        assert!(PhaseGrid::new(1, 8, (-1.0, 1.0), (-1.0, 1.0)).is_err());
        assert!(PhaseGrid::new(8, 8, (1.0, 1.0), (-1.0, 1.0)).is_err());
        assert!(PhaseGrid::new(8, 8, (-1.0, 1.0), (1.0, -1.0)).is_err());
        assert!(PhaseGrid::new(8, 8, (f64::NAN, 1.0), (-1.0, 1.0)).is_err());
    }
}
