//! Uniform 1D position grid with hard-wall boundaries.
//!
//! The grid carries M points x_i = x_min + i*dx, i = 0..M-1, with
//! dx = (x_max - x_min)/(M-1).  Wavefunctions are implicitly zero outside
//! the grid (hard walls), so finite-difference stencils use Dirichlet
//! closures at both ends.  Integrals over position carry the weight dx.

use crate::error::{QuantumError, Result};

/// Uniform position grid on [x_min, x_max] with hard-wall boundaries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridBasis {
    m: usize,
    x_min: f64,
    x_max: f64,
}

impl GridBasis {
    /// Build a grid with `m >= 2` points spanning `[x_min, x_max]`.
    pub fn new(m: usize, x_min: f64, x_max: f64) -> Result<Self> {
        let span = x_max - x_min;
        if m < 2 || !span.is_finite() || span <= 0.0 {
            return Err(QuantumError::BadGrid { m, span });
        }
        Ok(GridBasis { m, x_min, x_max })
    }

    /// Number of grid points.
    pub fn len(&self) -> usize {
        self.m
    }

    /// A grid is never empty; provided for clippy-friendly call sites.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Grid spacing dx.
    pub fn dx(&self) -> f64 {
        (self.x_max - self.x_min) / (self.m - 1) as f64
    }

    /// Left edge.
    pub fn x_min(&self) -> f64 {
        self.x_min
    }

    /// Right edge.
    pub fn x_max(&self) -> f64 {
        self.x_max
    }

    /// Coordinate of point `i`.
    pub fn x(&self, i: usize) -> f64 {
        self.x_min + i as f64 * self.dx()
    }

    /// All coordinates as a vector.
    pub fn points(&self) -> Vec<f64> {
        (0..self.m).map(|i| self.x(i)).collect()
    }
}
