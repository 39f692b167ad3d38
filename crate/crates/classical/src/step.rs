//! Time stepping by dimension splitting.
//!
//! One step advances the transport equation with a palindromic splitting,
//!
//!   x-advect(dt/2), p-advect(dt/2), p-diffuse(dt), p-advect(dt/2), x-advect(dt/2),
//!
//! whose symmetry cancels the first-order splitting error, leaving the
//! step second-order accurate in dt.  Every substep is a family of
//! one-dimensional conservative line updates (see `kernels`), so mass is
//! conserved to round-off and the minmod limiter keeps densities
//! non-negative as long as the caller's step obeys
//!
//!   max(|v| dt / dx, |F| dt / dp) <= 0.9   and   D dt / dp^2 <= 0.45.
//!
//! Violations are refused up front with the largest admissible step in the
//! error.  Pair mode splits the same way over four axes; its
//! difference-coupled channels diffuse along (p1, -p2) diagonals, where the
//! three-point stencil is exactly the relative-momentum operator
//! (d/dp1 - d/dp2)^2.

use crate::error::{ClassicalError, Result};
use crate::field::{PairPhaseField, PhaseSpaceField};
use crate::kernels::{advect_line, diffuse_line, max_advection_dt, max_diffusion_dt};
use crate::ops::{ClassicalOperatorSet, PairCoupling, PairOperatorSet, SingleOperatorSet};

const ADVECTION_LIMIT: f64 = 0.9;
const DIFFUSION_LIMIT: f64 = 0.45;

fn max_abs(values: &[f64]) -> f64 {
    values.iter().fold(0.0_f64, |m, &v| m.max(v.abs()))
}

fn check_dt(dt: f64, required: f64) -> Result<()> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(ClassicalError::BadTimeStep(dt));
    }
    if dt > required {
        return Err(ClassicalError::CflViolation {
            dt,
            required_dt: required,
        });
    }
    Ok(())
}

/// Largest step the single-coordinate stability bounds admit.
pub fn stable_dt_single(ops: &SingleOperatorSet) -> f64 {
    let grid = ops.grid();
    let adv_x = max_advection_dt(max_abs(ops.velocity()), grid.dx(), ADVECTION_LIMIT);
    let adv_p = max_advection_dt(max_abs(ops.force()), grid.dp(), ADVECTION_LIMIT);
    let dif_p = max_diffusion_dt(max_abs(ops.diffusion_total()), grid.dp(), DIFFUSION_LIMIT);
    adv_x.min(adv_p).min(dif_p)
}

/// Largest step the pair-mode stability bounds admit.
pub fn stable_dt_pair(ops: &PairOperatorSet) -> f64 {
    let grid = ops.grid();
    let mut required = f64::INFINITY;
    for axis in 0..2 {
        required = required.min(max_advection_dt(
            max_abs(ops.velocity(axis)),
            grid.dx(),
            ADVECTION_LIMIT,
        ));
        required = required.min(max_advection_dt(
            ops.force(axis).iter().fold(0.0_f64, |m, &v| m.max(v.abs())),
            grid.dp(),
            ADVECTION_LIMIT,
        ));
    }
    for ch in ops.channels() {
        let d_max = ch.diffusion.iter().fold(0.0_f64, |m, &v| m.max(v));
        required = required.min(max_diffusion_dt(d_max, grid.dp(), DIFFUSION_LIMIT));
    }
    required
}

/// Advance a density by one step of size `dt`.
///
/// Refuses steps beyond the stability bounds instead of producing garbage;
/// the error carries the largest admissible step.
pub fn step_classical(
    ops: &ClassicalOperatorSet,
    rho: &PhaseSpaceField,
    dt: f64,
) -> Result<PhaseSpaceField> {
    match ops {
        ClassicalOperatorSet::Single(single) => step_single(single, rho, dt),
        ClassicalOperatorSet::Pair(_) => Err(ClassicalError::GridMismatch(
            "pair operators advance four-dimensional fields; use step_classical_pair".into(),
        )),
    }
}

/// Advance a pair-mode density by one step of size `dt`.
pub fn step_classical_pair(
    ops: &ClassicalOperatorSet,
    rho: &PairPhaseField,
    dt: f64,
) -> Result<PairPhaseField> {
    match ops {
        ClassicalOperatorSet::Pair(pair) => step_pair(pair, rho, dt),
        ClassicalOperatorSet::Single(_) => Err(ClassicalError::GridMismatch(
            "single-coordinate operators advance planar fields; use step_classical".into(),
        )),
    }
}

fn step_single(ops: &SingleOperatorSet, rho: &PhaseSpaceField, dt: f64) -> Result<PhaseSpaceField> {
    let grid = ops.grid();
    if rho.grid() != grid {
        return Err(ClassicalError::GridMismatch(
            "field and operator grids differ".into(),
        ));
    }
    check_dt(dt, stable_dt_single(ops))?;

    let (mx, mp) = (grid.mx(), grid.mp());
    let (dx, dp) = (grid.dx(), grid.dp());
    let mut out = rho.clone();
    let data = out.values_mut();
    let mut line = vec![0.0; mx.max(mp)];
    let mut flux = vec![0.0; mx.max(mp) + 1];
    let half = 0.5 * dt;

    advect_x_lines(ops, data, half, dx, &mut line, &mut flux);
    for i in 0..mx {
        let f = ops.force()[i];
        let d = ops.diffusion_total()[i];
        let row = data.row_mut(i);
        let row = row.into_slice().expect("row of a C-order array");
        if f != 0.0 {
            advect_line(row, f, dp, half, &mut flux[..mp + 1]);
        }
        if d != 0.0 {
            diffuse_line(row, d, dp, dt, &mut flux[..mp + 1]);
        }
        if f != 0.0 {
            advect_line(row, f, dp, half, &mut flux[..mp + 1]);
        }
    }
    advect_x_lines(ops, data, half, dx, &mut line, &mut flux);

    Ok(out)
}

fn advect_x_lines(
    ops: &SingleOperatorSet,
    data: &mut ndarray::Array2<f64>,
    dt: f64,
    dx: f64,
    line: &mut [f64],
    flux: &mut [f64],
) {
    let (mx, mp) = data.dim();
    for j in 0..mp {
        let v = ops.velocity()[j];
        if v == 0.0 {
            continue;
        }
        for i in 0..mx {
            line[i] = data[[i, j]];
        }
        advect_line(&mut line[..mx], v, dx, dt, &mut flux[..mx + 1]);
        for i in 0..mx {
            data[[i, j]] = line[i];
        }
    }
}

fn step_pair(ops: &PairOperatorSet, rho: &PairPhaseField, dt: f64) -> Result<PairPhaseField> {
    let grid = ops.grid();
    if rho.grid() != grid {
        return Err(ClassicalError::GridMismatch(
            "field and operator grids differ".into(),
        ));
    }
    check_dt(dt, stable_dt_pair(ops))?;

    let (mx, mp) = (grid.mx(), grid.mp());
    let (dx, dp) = (grid.dx(), grid.dp());
    let mut out = rho.clone();
    let half = 0.5 * dt;
    let n = mx.max(mp);
    let mut line = vec![0.0; n];
    let mut flux = vec![0.0; n + 1];

    // Palindrome over the four advections, diffusion in the middle.
    advect_positions(ops, &mut out, half, dx, &mut line, &mut flux);
    advect_momenta(ops, &mut out, half, dp, &mut line, &mut flux);
    diffuse_pair(ops, &mut out, dt, dp, &mut line, &mut flux);
    advect_momenta(ops, &mut out, half, dp, &mut line, &mut flux);
    advect_positions(ops, &mut out, half, dx, &mut line, &mut flux);

    Ok(out)
}

fn advect_positions(
    ops: &PairOperatorSet,
    rho: &mut PairPhaseField,
    dt: f64,
    dx: f64,
    line: &mut [f64],
    flux: &mut [f64],
) {
    let grid = *ops.grid();
    let (mx, mp) = (grid.mx(), grid.mp());
    let data = rho.values_mut();
    // x1 lines: velocity set by j1
    for j1 in 0..mp {
        let v = ops.velocity(0)[j1];
        if v == 0.0 {
            continue;
        }
        for i2 in 0..mx {
            for j2 in 0..mp {
                for i1 in 0..mx {
                    line[i1] = data[[i1, i2, j1, j2]];
                }
                advect_line(&mut line[..mx], v, dx, dt, &mut flux[..mx + 1]);
                for i1 in 0..mx {
                    data[[i1, i2, j1, j2]] = line[i1];
                }
            }
        }
    }
    // x2 lines: velocity set by j2
    for j2 in 0..mp {
        let v = ops.velocity(1)[j2];
        if v == 0.0 {
            continue;
        }
        for i1 in 0..mx {
            for j1 in 0..mp {
                for i2 in 0..mx {
                    line[i2] = data[[i1, i2, j1, j2]];
                }
                advect_line(&mut line[..mx], v, dx, dt, &mut flux[..mx + 1]);
                for i2 in 0..mx {
                    data[[i1, i2, j1, j2]] = line[i2];
                }
            }
        }
    }
}

fn advect_momenta(
    ops: &PairOperatorSet,
    rho: &mut PairPhaseField,
    dt: f64,
    dp: f64,
    line: &mut [f64],
    flux: &mut [f64],
) {
    let grid = *ops.grid();
    let (mx, mp) = (grid.mx(), grid.mp());
    let data = rho.values_mut();
    for i1 in 0..mx {
        for i2 in 0..mx {
            let f1 = ops.force(0)[[i1, i2]];
            let f2 = ops.force(1)[[i1, i2]];
            if f1 != 0.0 {
                for j2 in 0..mp {
                    for j1 in 0..mp {
                        line[j1] = data[[i1, i2, j1, j2]];
                    }
                    advect_line(&mut line[..mp], f1, dp, dt, &mut flux[..mp + 1]);
                    for j1 in 0..mp {
                        data[[i1, i2, j1, j2]] = line[j1];
                    }
                }
            }
            if f2 != 0.0 {
                // innermost axis is contiguous in a C-order array
                for j1 in 0..mp {
                    let row = data
                        .slice_mut(ndarray::s![i1, i2, j1, ..])
                        .into_slice()
                        .expect("innermost axis of a C-order array");
                    advect_line(row, f2, dp, dt, &mut flux[..mp + 1]);
                }
            }
        }
    }
}

fn diffuse_pair(
    ops: &PairOperatorSet,
    rho: &mut PairPhaseField,
    dt: f64,
    dp: f64,
    line: &mut [f64],
    flux: &mut [f64],
) {
    let grid = *ops.grid();
    let (mx, mp) = (grid.mx(), grid.mp());
    let data = rho.values_mut();
    for ch in ops.channels() {
        for i1 in 0..mx {
            for i2 in 0..mx {
                let d = ch.diffusion[[i1, i2]];
                if d == 0.0 {
                    continue;
                }
                match ch.coupling {
                    PairCoupling::Axis(0) => {
                        for j2 in 0..mp {
                            for j1 in 0..mp {
                                line[j1] = data[[i1, i2, j1, j2]];
                            }
                            diffuse_line(&mut line[..mp], d, dp, dt, &mut flux[..mp + 1]);
                            for j1 in 0..mp {
                                data[[i1, i2, j1, j2]] = line[j1];
                            }
                        }
                    }
                    PairCoupling::Axis(_) => {
                        for j1 in 0..mp {
                            for j2 in 0..mp {
                                line[j2] = data[[i1, i2, j1, j2]];
                            }
                            diffuse_line(&mut line[..mp], d, dp, dt, &mut flux[..mp + 1]);
                            for j2 in 0..mp {
                                data[[i1, i2, j1, j2]] = line[j2];
                            }
                        }
                    }
                    PairCoupling::Difference => {
                        // anti-diagonal lines j1 + j2 = s; moving one cell
                        // along the line applies (d/dp1 - d/dp2)^2 / dp^2
                        for s in 0..(2 * mp - 1) {
                            let lo = s.saturating_sub(mp - 1);
                            let hi = s.min(mp - 1);
                            let len = hi - lo + 1;
                            if len < 2 {
                                continue;
                            }
                            for (k, j1) in (lo..=hi).enumerate() {
                                line[k] = data[[i1, i2, j1, s - j1]];
                            }
                            diffuse_line(&mut line[..len], d, dp, dt, &mut flux[..len + 1]);
                            for (k, j1) in (lo..=hi).enumerate() {
                                data[[i1, i2, j1, s - j1]] = line[k];
                            }
                        }
                    }
                }
            }
        }
    }
}
