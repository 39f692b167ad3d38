//! Grid realization of the classical transport operator.
//!
//! For one coordinate x with mass mu, potential V(x), and channels
//! (gamma_k, g_k), the phase-space density obeys the Fokker-Planck form
//!
//!   d rho/dt = -(p/mu) d rho/dx + V'(x) d rho/dp + sum_k D_k(x) d^2 rho/dp^2,
//!   D_k(x) = gamma_k g_k'(x)^2 >= 0,
//!
//! so the operator set is three sampled fields: the streaming velocity
//! v_j = p_j/mu per momentum cell, the force F_i = -V'(x_i) per position
//! cell, and the momentum-diffusion coefficient D(x_i).
//!
//! Two coordinates are supported in pair mode on a 4D grid.  A channel
//! whose generator involves one coordinate diffuses that momentum alone;
//! a generator depending only on the difference y1 - y2 produces the
//! relative-momentum operator g'(y1-y2)^2 (d/dp1 - d/dp2)^2, handled on
//! diagonal momentum lines.  Any other two-coordinate generator has a
//! genuinely anisotropic diffusion tensor and is rejected.

use meso_algebra::{LiouvillianSpec, Polynomial};
use ndarray::Array2;
use num::ToPrimitive;

use crate::error::{ClassicalError, Result};
use crate::grid::{PairGrid, PhaseGrid};

/// One decoherence channel reduced to its momentum-diffusion profile.
#[derive(Debug, Clone)]
pub struct ClassicalChannel {
    /// Channel strength (the gamma in D = gamma g'^2).
    pub gamma: f64,
    /// Generator slope g'(x) at each position cell.
    pub gprime: Vec<f64>,
    /// Diffusion coefficient D(x) = gamma g'(x)^2 at each position cell.
    pub diffusion: Vec<f64>,
}

/// Sampled transport coefficients for one coordinate.
#[derive(Debug, Clone)]
pub struct SingleOperatorSet {
    grid: PhaseGrid,
    mass: f64,
    velocity: Vec<f64>,
    force: Vec<f64>,
    channels: Vec<ClassicalChannel>,
    diffusion_total: Vec<f64>,
}

impl SingleOperatorSet {
    pub fn grid(&self) -> &PhaseGrid {
        &self.grid
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    /// Streaming velocity p_j / mu for each momentum cell.
    pub fn velocity(&self) -> &[f64] {
        &self.velocity
    }

    /// Force -V'(x_i) for each position cell.
    pub fn force(&self) -> &[f64] {
        &self.force
    }

    pub fn channels(&self) -> &[ClassicalChannel] {
        &self.channels
    }

    /// Summed diffusion coefficient sum_k D_k(x_i) per position cell.
    pub fn diffusion_total(&self) -> &[f64] {
        &self.diffusion_total
    }
}

/// How a pair-mode channel couples to the two momenta.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairCoupling {
    /// Generator involves one coordinate: diffusion along that momentum.
    Axis(usize),
    /// Generator depends on y1 - y2 only: relative-momentum diffusion
    /// (d/dp1 - d/dp2)^2 along diagonal momentum lines.
    Difference,
}

/// One pair-mode channel with its diffusion profile over (x1, x2).
#[derive(Debug, Clone)]
pub struct PairChannel {
    pub gamma: f64,
    pub coupling: PairCoupling,
    /// D(x1, x2) = gamma * (coupling slope)^2, shape (mx, mx).
    pub diffusion: Array2<f64>,
}

/// Sampled transport coefficients for the two-coordinate pair mode.
#[derive(Debug, Clone)]
pub struct PairOperatorSet {
    grid: PairGrid,
    masses: [f64; 2],
    /// Per-axis streaming velocities p_j / mu_alpha.
    velocity: [Vec<f64>; 2],
    /// Forces -dV/dy_alpha sampled over (x1, x2).
    force: [Array2<f64>; 2],
    channels: Vec<PairChannel>,
}

impl PairOperatorSet {
    pub fn grid(&self) -> &PairGrid {
        &self.grid
    }

    pub fn masses(&self) -> [f64; 2] {
        self.masses
    }

    pub fn velocity(&self, axis: usize) -> &[f64] {
        &self.velocity[axis]
    }

    pub fn force(&self, axis: usize) -> &Array2<f64> {
        &self.force[axis]
    }

    pub fn channels(&self) -> &[PairChannel] {
        &self.channels
    }
}

/// Transport operators for either supported coordinate count.
#[derive(Debug, Clone)]
pub enum ClassicalOperatorSet {
    Single(SingleOperatorSet),
    Pair(PairOperatorSet),
}

/// Grid choice matching the coordinate count of the operator.
#[derive(Debug, Clone, Copy)]
pub enum ClassicalGrids {
    Single(PhaseGrid),
    Pair(PairGrid),
}

impl From<PhaseGrid> for ClassicalGrids {
    fn from(g: PhaseGrid) -> Self {
        ClassicalGrids::Single(g)
    }
}

impl From<PairGrid> for ClassicalGrids {
    fn from(g: PairGrid) -> Self {
        ClassicalGrids::Pair(g)
    }
}

fn coeff_f64(c: &meso_algebra::Coeff) -> Result<f64> {
    c.to_f64()
        .ok_or_else(|| ClassicalError::CoefficientOverflow(c.to_string()))
}

/// Sample the transport coefficients of `spec` on the given grid.
pub fn build_classical(spec: &LiouvillianSpec, grids: &ClassicalGrids) -> Result<ClassicalOperatorSet> {
    spec.validate()
        .map_err(|e| ClassicalError::InvalidOperator(e.to_string()))?;
    match (spec.n_coordinates(), grids) {
        (1, ClassicalGrids::Single(grid)) => build_single(spec, *grid).map(ClassicalOperatorSet::Single),
        (2, ClassicalGrids::Pair(grid)) => build_pair(spec, *grid).map(ClassicalOperatorSet::Pair),
        (1, ClassicalGrids::Pair(_)) | (2, ClassicalGrids::Single(_)) => {
            Err(ClassicalError::GridMismatch(format!(
                "{} coordinate(s) need a matching grid dimensionality",
                spec.n_coordinates()
            )))
        }
        (n, _) => Err(ClassicalError::UnsupportedCoordinates(n)),
    }
}

fn positive_mass(spec: &LiouvillianSpec, idx: usize) -> Result<f64> {
    let mass = coeff_f64(&spec.masses[idx])?;
    if !(mass > 0.0) {
        return Err(ClassicalError::InvalidOperator(format!(
            "mass must be positive, got {mass}"
        )));
    }
    Ok(mass)
}

fn build_single(spec: &LiouvillianSpec, grid: PhaseGrid) -> Result<SingleOperatorSet> {
    let mass = positive_mass(spec, 0)?;
    let coord = spec.coordinates[0].clone();
    let xs = grid.xs();

    let v_poly = spec.potential_total();
    let vprime = v_poly
        .derivative(&coord)
        .map_err(|e| ClassicalError::InvalidOperator(e.to_string()))?;
    let force: Vec<f64> = xs.iter().map(|&x| -vprime.eval_f64(&[x])).collect();

    let velocity: Vec<f64> = grid.ps().iter().map(|&p| p / mass).collect();

    let mut channels = Vec::with_capacity(spec.decoherence.len());
    let mut diffusion_total = vec![0.0; grid.mx()];
    for term in &spec.decoherence {
        let gamma = coeff_f64(&term.strength)?;
        let gp_poly = term
            .generator
            .derivative(&coord)
            .map_err(|e| ClassicalError::InvalidOperator(e.to_string()))?;
        let gprime: Vec<f64> = xs.iter().map(|&x| gp_poly.eval_f64(&[x])).collect();
        let diffusion: Vec<f64> = gprime.iter().map(|&s| gamma * s * s).collect();
        for (tot, d) in diffusion_total.iter_mut().zip(&diffusion) {
            *tot += d;
        }
        channels.push(ClassicalChannel {
            gamma,
            gprime,
            diffusion,
        });
    }

    Ok(SingleOperatorSet {
        grid,
        mass,
        velocity,
        force,
        channels,
        diffusion_total,
    })
}

/// Classify a two-coordinate generator by its momentum coupling.
fn classify_pair_generator(g: &Polynomial, coords: &[String]) -> Result<(PairCoupling, Polynomial)> {
    let used = g.used_vars();
    match used.len() {
        1 => {
            let axis = coords
                .iter()
                .position(|c| *c == used[0])
                .expect("generator variables come from the coordinate list");
            let slope = g
                .derivative(&used[0])
                .map_err(|e| ClassicalError::InvalidOperator(e.to_string()))?;
            Ok((PairCoupling::Axis(axis), slope))
        }
        2 => {
            // depends on y1 - y2 alone  <=>  dg/dy1 + dg/dy2 = 0 identically
            let d1 = g
                .derivative(&coords[0])
                .map_err(|e| ClassicalError::InvalidOperator(e.to_string()))?;
            let d2 = g
                .derivative(&coords[1])
                .map_err(|e| ClassicalError::InvalidOperator(e.to_string()))?;
            if d1.add(&d2).is_zero() {
                Ok((PairCoupling::Difference, d1))
            } else {
                Err(ClassicalError::UnsupportedChannel(format!(
                    "{} couples both coordinates but is not a function of their difference",
                    g.canonical_text()
                )))
            }
        }
        _ => Err(ClassicalError::UnsupportedChannel(format!(
            "generator {} uses {} coordinates",
            g.canonical_text(),
            used.len()
        ))),
    }
}

fn build_pair(spec: &LiouvillianSpec, grid: PairGrid) -> Result<PairOperatorSet> {
    let masses = [positive_mass(spec, 0)?, positive_mass(spec, 1)?];
    let coords = spec.coordinates.clone();
    let mx = grid.mx();

    let v_poly = spec.potential_total();
    let mut force = [Array2::zeros((mx, mx)), Array2::zeros((mx, mx))];
    for (axis, coord) in coords.iter().enumerate() {
        let vprime = v_poly
            .derivative(coord)
            .map_err(|e| ClassicalError::InvalidOperator(e.to_string()))?;
        for i1 in 0..mx {
            for i2 in 0..mx {
                force[axis][[i1, i2]] = -vprime.eval_f64(&[grid.x(i1), grid.x(i2)]);
            }
        }
    }

    let velocity = [grid.velocities(masses[0]), grid.velocities(masses[1])];

    let mut channels = Vec::with_capacity(spec.decoherence.len());
    for term in &spec.decoherence {
        let gamma = coeff_f64(&term.strength)?;
        let (coupling, slope) = classify_pair_generator(&term.generator, &coords)?;
        let mut diffusion = Array2::zeros((mx, mx));
        for i1 in 0..mx {
            for i2 in 0..mx {
                let s = slope.eval_f64(&[grid.x(i1), grid.x(i2)]);
                diffusion[[i1, i2]] = gamma * s * s;
            }
        }
        channels.push(PairChannel {
            gamma,
            coupling,
            diffusion,
        });
    }

    Ok(PairOperatorSet {
        grid,
        masses,
        velocity,
        force,
        channels,
    })
}
