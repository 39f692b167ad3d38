//! Conservative one-dimensional transport kernels.
//!
//! Every update is written in flux form,
//! `q_i <- q_i - (dt/h) (F_{i+1/2} - F_{i-1/2})`,
//! with the two boundary fluxes pinned to zero, so each line conserves
//! `sum q_i h` to round-off and nothing leaves the box.
//!
//! * `advect_line`: second-order upwind transport at constant speed, with a
//!   minmod-limited linear reconstruction (TVD for |v| dt / h <= 1, so no
//!   new extrema and in particular no negative densities).
//! * `diffuse_line`: explicit central differencing of `d * d^2q/ds^2`,
//!   monotone for d dt / h^2 <= 1/2.
//!
//! Both kernels act on a gathered line of cell averages; callers slice
//! multi-dimensional fields into lines (including diagonal lines for
//! difference-coupled diffusion) and pass the matching spacing.

/// Slope limiter: zero at extrema, the smaller one-sided difference otherwise.
fn minmod(a: f64, b: f64) -> f64 {
    if a * b <= 0.0 {
        0.0
    } else if a.abs() < b.abs() {
        a
    } else {
        b
    }
}

/// Advance `dq/dt + v dq/ds = 0` on one line by `dt`.
///
/// `flux` is scratch for the `n + 1` interface fluxes; the ends stay zero.
pub fn advect_line(q: &mut [f64], v: f64, h: f64, dt: f64, flux: &mut [f64]) {
    let n = q.len();
    debug_assert_eq!(flux.len(), n + 1);
    if n == 0 || v == 0.0 {
        return;
    }
    let c = v * dt / h;
    flux[0] = 0.0;
    flux[n] = 0.0;
    for i in 1..n {
        // interface between cells i-1 and i; reconstruct in the donor cell
        let face = if v >= 0.0 {
            let d = i - 1;
            let slope = if d == 0 {
                0.0
            } else {
                minmod(q[d] - q[d - 1], q[d + 1] - q[d])
            };
            q[d] + 0.5 * (1.0 - c) * slope
        } else {
            let d = i;
            let slope = if d + 1 == n {
                0.0
            } else {
                minmod(q[d] - q[d - 1], q[d + 1] - q[d])
            };
            q[d] - 0.5 * (1.0 + c) * slope
        };
        flux[i] = v * face;
    }
    let r = dt / h;
    for i in 0..n {
        q[i] -= r * (flux[i + 1] - flux[i]);
    }
}

/// Advance `dq/dt = d * d^2q/ds^2` on one line by `dt` (constant `d`).
///
/// `flux` is scratch for the `n + 1` interface fluxes; the ends stay zero.
pub fn diffuse_line(q: &mut [f64], d: f64, h: f64, dt: f64, flux: &mut [f64]) {
    let n = q.len();
    debug_assert_eq!(flux.len(), n + 1);
    if n == 0 || d == 0.0 {
        return;
    }
    flux[0] = 0.0;
    flux[n] = 0.0;
    for i in 1..n {
        flux[i] = d * (q[i] - q[i - 1]) / h;
    }
    let r = dt / h;
    for i in 0..n {
        q[i] += r * (flux[i + 1] - flux[i]);
    }
}

/// Largest `dt` with `|v| dt / h <= limit` (infinite when `v = 0`).
pub fn max_advection_dt(v_max: f64, h: f64, limit: f64) -> f64 {
    if v_max == 0.0 {
        f64::INFINITY
    } else {
        limit * h / v_max.abs()
    }
}

/// Largest `dt` with `d dt / h^2 <= limit` (infinite when `d = 0`).
pub fn max_diffusion_dt(d_max: f64, h: f64, limit: f64) -> f64 {
    if d_max == 0.0 {
        f64::INFINITY
    } else {
        limit * h * h / d_max
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn mass(q: &[f64], h: f64) -> f64 {
        q.iter().sum::<f64>() * h
    }

    #[test]
    fn advection_translates_a_bump_without_overshoot() {
        let n = 200;
        let h = 0.1;
        let mut q: Vec<f64> = (0..n)
            .map(|i| {
                let s = (i as f64 + 0.5) * h - 5.0;
                (-s * s / 0.5).exp()
            })
            .collect();
        let m0 = mass(&q, h);
        let peak0 = q.iter().cloned().fold(0.0, f64::max);
        let v = 1.0;
        let dt = 0.05; // courant 0.5
        let mut flux = vec![0.0; n + 1];
        for _ in 0..40 {
            advect_line(&mut q, v, h, dt, &mut flux);
        }
        // center moved from 5.0 to 7.0
        let centroid: f64 = (0..n).map(|i| ((i as f64 + 0.5) * h) * q[i]).sum::<f64>() * h / m0;
        assert_relative_eq!(centroid, 7.0, epsilon = 2e-3);
        assert_relative_eq!(mass(&q, h), m0, epsilon = 1e-13);
        // TVD: no overshoot beyond the initial peak, no negatives
        assert!(q.iter().cloned().fold(0.0, f64::max) <= peak0 + 1e-12);
        assert!(q.iter().all(|&v| v >= -1e-15));
    }

    #[test]
    fn diffusion_grows_the_variance_at_exactly_two_d_per_unit_time() {
        let n = 400;
        let h = 0.05;
        let mut q: Vec<f64> = (0..n)
            .map(|i| {
                let s = (i as f64 + 0.5) * h - 10.0;
                (-s * s / 0.02).exp()
            })
            .collect();
        let m0 = mass(&q, h);
        let var = |q: &[f64]| -> f64 {
            let m: f64 = mass(q, h);
            let mean: f64 = (0..n).map(|i| ((i as f64 + 0.5) * h) * q[i]).sum::<f64>() * h / m;
            (0..n)
                .map(|i| {
                    let s = (i as f64 + 0.5) * h - mean;
                    s * s * q[i]
                })
                .sum::<f64>()
                * h
                / m
        };
        let v0 = var(&q);
        let d = 0.3;
        let dt = 0.002; // d dt / h^2 = 0.24
        let mut flux = vec![0.0; n + 1];
        for _ in 0..250 {
            diffuse_line(&mut q, d, h, dt, &mut flux);
        }
        // second moment of the explicit stencil grows by exactly 2 d dt per step
        assert_relative_eq!(var(&q) - v0, 2.0 * d * 0.5, epsilon = 1e-10);
        assert_relative_eq!(mass(&q, h), m0, epsilon = 1e-13);
    }

    #[test]
    fn stability_windows_match_the_advertised_bounds() {
        assert_relative_eq!(max_advection_dt(2.0, 0.1, 0.9), 0.045);
        assert_relative_eq!(max_diffusion_dt(0.5, 0.1, 0.45), 0.009);
        assert!(max_advection_dt(0.0, 0.1, 0.9).is_infinite());
        assert!(max_diffusion_dt(0.0, 0.1, 0.45).is_infinite());
    }
}
