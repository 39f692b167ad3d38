//! Midpoint-quadrature observables of a phase-space density.
//!
//! All expectations are mass-normalized sums over cell centers,
//! `<w> = sum w(x_i, p_j) rho_ij / sum rho_ij`, so they obey the continuum
//! moment identities up to quadrature error:
//!
//!   d<x>/dt = <p>/mu,   d<p>/dt = <F>,   d<p^2>/dt = 2<p F> + 2<D>,
//!
//! with <D> = sum_k gamma_k <g_k'(x)^2> the heating rate injected by the
//! channels.

use crate::error::{ClassicalError, Result};
use crate::field::PhaseSpaceField;
use crate::ops::ClassicalOperatorSet;

/// Low-order moments of a planar density.
#[derive(Debug, Clone, PartialEq)]
pub struct Moments {
    /// Total mass `sum rho dx dp` (1 for a physical density).
    pub mass: f64,
    pub mean_x: f64,
    pub mean_p: f64,
    pub mean_x2: f64,
    pub mean_p2: f64,
    /// `<g_k'(x)^2>` for each channel, in operator order; the heating rate
    /// of `<p^2>` is `2 sum_k gamma_k <g_k'^2>`.
    pub mean_gprime_sq: Vec<f64>,
}

/// Evaluate the moment record of `rho` under single-coordinate operators.
pub fn moments(ops: &ClassicalOperatorSet, rho: &PhaseSpaceField) -> Result<Moments> {
    let single = match ops {
        ClassicalOperatorSet::Single(s) => s,
        ClassicalOperatorSet::Pair(_) => {
            return Err(ClassicalError::GridMismatch(
                "moment records are defined for single-coordinate densities".into(),
            ))
        }
    };
    let grid = single.grid();
    if rho.grid() != grid {
        return Err(ClassicalError::GridMismatch(
            "field and operator grids differ".into(),
        ));
    }

    let (mx, mp) = (grid.mx(), grid.mp());
    let ps = grid.ps();
    let data = rho.values();

    // per-position partial sums over the momentum axis
    let mut s0 = vec![0.0; mx];
    let mut s1 = vec![0.0; mx];
    let mut s2 = vec![0.0; mx];
    for i in 0..mx {
        for j in 0..mp {
            let v = data[[i, j]];
            s0[i] += v;
            s1[i] += ps[j] * v;
            s2[i] += ps[j] * ps[j] * v;
        }
    }

    let total: f64 = s0.iter().sum();
    let mass = total * grid.cell_area();
    if total <= 0.0 {
        return Err(ClassicalError::BadField(
            "cannot take moments of a massless field".into(),
        ));
    }

    let mut mean_x = 0.0;
    let mut mean_x2 = 0.0;
    for i in 0..mx {
        let x = grid.x(i);
        mean_x += x * s0[i];
        mean_x2 += x * x * s0[i];
    }
    let mean_p: f64 = s1.iter().sum();
    let mean_p2: f64 = s2.iter().sum();

    let mean_gprime_sq = single
        .channels()
        .iter()
        .map(|ch| {
            let num: f64 = ch
                .gprime
                .iter()
                .zip(&s0)
                .map(|(&gp, &w)| gp * gp * w)
                .sum();
            num / total
        })
        .collect();

    Ok(Moments {
        mass,
        mean_x: mean_x / total,
        mean_p: mean_p / total,
        mean_x2: mean_x2 / total,
        mean_p2: mean_p2 / total,
        mean_gprime_sq,
    })
}
