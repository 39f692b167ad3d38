//! Stochastic-unraveling cross-check of the master equation.
//!
//! Each trajectory evolves a pure state under the Hamiltonian plus a white
//! multiplicative noise on every channel,
//!
//!   H_eff(t) = H + sum_k xi_k(t) sqrt(2 gamma_k) g_k,   <xi_k^2> = 1/dt,
//!
//! realized per step as the Strang splitting
//!
//!   psi <- U(dt/2) * exp(-i sqrt(2 gamma_k dt) w_k g_k / hbar) * U(dt/2) psi,
//!
//! with w_k standard normal and U the exact half-step propagator built from
//! an eigendecomposition of H.  Averaging psi psi^dagger over trajectories
//! converges to the double-bracket master equation at O(1/sqrt(N)).
//!
//! Trajectory k always draws from stream k of the counter-based generator,
//! so enlarging the ensemble reuses the existing trajectories verbatim and
//! results are bit-reproducible for a fixed (seed, dt, steps) regardless of
//! ensemble size.

use nalgebra::{Complex, DMatrix};
use ndarray::{Array1, Array2};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::density::DensityMatrix;
use crate::error::{QuantumError, Result};
use crate::operators::QuantumOperatorSet;

/// Tuning knobs for [`unravel_stochastic_with`].
#[derive(Debug, Clone, Copy, Default)]
pub struct UnravelOptions {
    /// Accumulate the ensemble mean every this many steps (0 = final only).
    pub snapshot_every: usize,
}

/// Ensemble average and bookkeeping of a stochastic run.
#[derive(Debug, Clone)]
pub struct UnravelOutcome {
    /// Mean of psi psi^dagger over all trajectories at the final time.
    pub mean_final: DensityMatrix,
    /// Intermediate ensemble means at the snapshot cadence.
    pub snapshots: Vec<(f64, DensityMatrix)>,
    /// Non-fatal diagnostics (e.g. noise increment too large for dt).
    pub warnings: Vec<String>,
}

/// Stochastic unraveling with default options.
pub fn unravel_stochastic(
    ops: &QuantumOperatorSet,
    rho0: &DensityMatrix,
    dt: f64,
    steps: usize,
    trajectories: usize,
    seed: u64,
) -> Result<UnravelOutcome> {
    unravel_stochastic_with(ops, rho0, dt, steps, trajectories, seed, UnravelOptions::default())
}

/// Stochastic unraveling of the master equation; see the module docs.
pub fn unravel_stochastic_with(
    ops: &QuantumOperatorSet,
    rho0: &DensityMatrix,
    dt: f64,
    steps: usize,
    trajectories: usize,
    seed: u64,
    options: UnravelOptions,
) -> Result<UnravelOutcome> {
    if trajectories == 0 {
        return Err(QuantumError::NoTrajectories);
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(QuantumError::BadState(format!(
            "time step must be positive and finite, got {dt}"
        )));
    }
    let basis = ops.basis();
    if rho0.basis() != basis {
        return Err(QuantumError::DimensionMismatch {
            expected: basis.len(),
            found: rho0.basis().len(),
        });
    }
    rho0.validate()?;
    let (weight, psi0) = rho0.principal_component();
    if weight < 1.0 - 1e-6 {
        return Err(QuantumError::BadState(format!(
            "stochastic unraveling needs a pure initial state; largest mixture weight is {weight:.6}"
        )));
    }

    let m = basis.len();
    let dx = basis.dx();
    let hbar = ops.hbar();
    let u_half = half_step_propagator(ops, dt);

    // Per-channel phase amplitude sqrt(2 gamma dt)/hbar; a kick larger than
    // one radian at the generator's extremes means dt under-resolves the
    // noise, which is worth flagging but not fatal.
    let mut warnings = Vec::new();
    let phases: Vec<(f64, &[f64])> = ops
        .channels()
        .iter()
        .map(|ch| ((2.0 * ch.gamma * dt).sqrt() / hbar, ch.g.as_slice()))
        .collect();
    for (k, (phi, g)) in phases.iter().enumerate() {
        let max_g = g.iter().fold(0.0f64, |a, &v| a.max(v.abs()));
        if phi * max_g > 1.0 {
            warnings.push(format!(
                "channel {k}: noise increment {:.3} rad exceeds 1; reduce dt for a faithful unraveling",
                phi * max_g
            ));
        }
    }

    let cadence = options.snapshot_every;
    let snap_steps: Vec<usize> = if cadence == 0 {
        Vec::new()
    } else {
        (1..=steps).filter(|s| s % cadence == 0 && *s != steps).collect()
    };
    let mut snap_sums: Vec<Array2<Complex64>> =
        snap_steps.iter().map(|_| Array2::zeros((m, m))).collect();
    let mut final_sum: Array2<Complex64> = Array2::zeros((m, m));

    let mut psi: Array1<Complex64> = Array1::zeros(m);
    for traj in 0..trajectories {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(traj as u64);
        psi.assign(&psi0);
        let mut snap_cursor = 0;
        for step in 1..=steps {
            psi = u_half.dot(&psi);
            for (phi, g) in &phases {
                let w: f64 = StandardNormal.sample(&mut rng);
                let scale = phi * w;
                for (amp, &gv) in psi.iter_mut().zip(g.iter()) {
                    *amp *= Complex64::new(0.0, -scale * gv).exp();
                }
            }
            psi = u_half.dot(&psi);
            let norm2: f64 = psi.iter().map(|c| c.norm_sqr()).sum::<f64>() * dx;
            let inv = 1.0 / norm2.sqrt();
            psi.mapv_inplace(|c| c * inv);
            if snap_cursor < snap_steps.len() && snap_steps[snap_cursor] == step {
                accumulate_outer(&mut snap_sums[snap_cursor], &psi);
                snap_cursor += 1;
            }
        }
        accumulate_outer(&mut final_sum, &psi);
    }

    let scale = Complex64::new(1.0 / trajectories as f64, 0.0);
    let mut snapshots = Vec::with_capacity(snap_steps.len());
    for (s, sum) in snap_steps.iter().zip(snap_sums.into_iter()) {
        let mut mean = DensityMatrix::from_matrix(basis, sum * scale)?;
        mean.hermitize();
        snapshots.push((*s as f64 * dt, mean));
    }
    let mut mean_final = DensityMatrix::from_matrix(basis, final_sum * scale)?;
    mean_final.hermitize();
    Ok(UnravelOutcome {
        mean_final,
        snapshots,
        warnings,
    })
}

/// Exact half-step propagator exp(-i H dt / (2 hbar)) via eigendecomposition.
fn half_step_propagator(ops: &QuantumOperatorSet, dt: f64) -> Array2<Complex64> {
    let m = ops.basis().len();
    let h = ops.hamiltonian();
    let mat = DMatrix::from_fn(m, m, |i, j| {
        let c = h[[i, j]];
        Complex::new(c.re, c.im)
    });
    let eig = mat.symmetric_eigen();
    let angle = -dt / (2.0 * ops.hbar());
    let mut u = Array2::zeros((m, m));
    for i in 0..m {
        for j in 0..m {
            let mut acc = Complex64::new(0.0, 0.0);
            for k in 0..m {
                let qik = eig.eigenvectors[(i, k)];
                let qjk = eig.eigenvectors[(j, k)];
                let phase = Complex64::new(0.0, angle * eig.eigenvalues[k]).exp();
                acc += Complex64::new(qik.re, qik.im)
                    * phase
                    * Complex64::new(qjk.re, -qjk.im);
            }
            u[[i, j]] = acc;
        }
    }
    u
}

fn accumulate_outer(sum: &mut Array2<Complex64>, psi: &Array1<Complex64>) {
    let m = psi.len();
    for i in 0..m {
        let pi = psi[i];
        for j in 0..m {
            sum[[i, j]] += pi * psi[j].conj();
        }
    }
}
