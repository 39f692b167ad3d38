//! Deterministic time evolution of the master equation.
//!
//! `evolve_density` integrates d rho/dt = L(rho) with classic RK4 and
//! enforces hermiticity after every step (the residue is recorded *before*
//! enforcement so the monitor sees the raw integrator error).  Trace drift
//! is logged, never renormalized away: a healthy run keeps |tr rho - 1|
//! at rounding level because the rate matrix is traceless by construction.
//!
//! `dephasing_closed_form` is the frozen-kinetic analytic solution
//!
//!   rho(x, x', t) = rho(x, x', 0) * exp(-i (V(x) - V(x')) t / hbar)
//!                                 * exp(-(gamma/hbar^2) (g(x) - g(x'))^2 t),
//!
//! exact when the Hamiltonian is diagonal in position (infinite-mass limit)
//! and there is exactly one channel.

use meso_algebra::LiouvillianSpec;
use num::ToPrimitive;
use num_complex::Complex64;

use crate::density::DensityMatrix;
use crate::error::{QuantumError, Result};
use crate::grid::GridBasis;
use crate::operators::{build_operators, KineticMode, QuantumOperatorSet};

/// Tuning knobs for [`evolve_density_with`].
#[derive(Debug, Clone, Copy)]
pub struct EvolveOptions {
    /// Keep a full state snapshot every this many steps (0 = final only).
    pub snapshot_every: usize,
    /// Compute the spectrum (min eigenvalue) every this many steps; the
    /// final step is always sampled.  The eigensolve is O(M^3) per sample.
    pub spectrum_every: usize,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions {
            snapshot_every: 0,
            spectrum_every: 1,
        }
    }
}

/// Per-step monitor row.
#[derive(Debug, Clone, Copy)]
pub struct StepRecord {
    pub step: usize,
    pub t: f64,
    pub trace: f64,
    /// tr rho - tr rho(0).
    pub trace_drift: f64,
    /// Hermiticity residue of the raw RK4 update, before enforcement.
    pub hermiticity_residue: f64,
    /// Smallest eigenvalue of rho*dx; `None` on steps where the spectrum
    /// was not sampled.
    pub min_eigenvalue: Option<f64>,
    pub purity: f64,
    pub offdiag_l1: f64,
    pub expect_x: f64,
    pub expect_p2: f64,
}

/// Worst-case monitor values over a whole run.
#[derive(Debug, Clone, Copy)]
pub struct MonitorSummary {
    pub max_abs_trace_drift: f64,
    pub max_hermiticity_residue: f64,
    pub min_eigenvalue: f64,
}

/// Result of a deterministic evolution.
#[derive(Debug, Clone)]
pub struct Evolution {
    pub final_state: DensityMatrix,
    pub records: Vec<StepRecord>,
    pub snapshots: Vec<(f64, DensityMatrix)>,
    pub monitors: MonitorSummary,
}

/// RK4 integration with default options.
pub fn evolve_density(
    ops: &QuantumOperatorSet,
    rho0: &DensityMatrix,
    dt: f64,
    steps: usize,
) -> Result<Evolution> {
    evolve_density_with(ops, rho0, dt, steps, EvolveOptions::default())
}

/// RK4 integration of d rho/dt = L(rho).
pub fn evolve_density_with(
    ops: &QuantumOperatorSet,
    rho0: &DensityMatrix,
    dt: f64,
    steps: usize,
    options: EvolveOptions,
) -> Result<Evolution> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(QuantumError::BadState(format!(
            "time step must be positive and finite, got {dt}"
        )));
    }
    rho0.validate()?;
    let mut rho = rho0.clone();
    let norm0 = rho.frobenius();
    let trace0 = rho.trace();

    let mut records = Vec::with_capacity(steps + 1);
    let mut snapshots = Vec::new();
    let mut monitors = MonitorSummary {
        max_abs_trace_drift: 0.0,
        max_hermiticity_residue: 0.0,
        min_eigenvalue: f64::INFINITY,
    };

    let spectrum_every = options.spectrum_every.max(1);
    let record = |rho: &DensityMatrix,
                      step: usize,
                      raw_residue: f64,
                      monitors: &mut MonitorSummary|
     -> StepRecord {
        let sample_spectrum = step == steps || step % spectrum_every == 0;
        let min_eig = sample_spectrum.then(|| rho.min_eigenvalue());
        let trace = rho.trace();
        let rec = StepRecord {
            step,
            t: step as f64 * dt,
            trace,
            trace_drift: trace - trace0,
            hermiticity_residue: raw_residue,
            min_eigenvalue: min_eig,
            purity: rho.purity(),
            offdiag_l1: rho.offdiag_l1(),
            expect_x: rho.expectation_x(),
            expect_p2: rho.expectation_p2(ops.hbar()),
        };
        monitors.max_abs_trace_drift = monitors.max_abs_trace_drift.max(rec.trace_drift.abs());
        monitors.max_hermiticity_residue = monitors.max_hermiticity_residue.max(raw_residue);
        if let Some(e) = min_eig {
            monitors.min_eigenvalue = monitors.min_eigenvalue.min(e);
        }
        rec
    };

    records.push(record(&rho, 0, rho.hermiticity_residue(), &mut monitors));

    for step in 1..=steps {
        let k1 = ops.apply_liouvillian(&rho)?;
        let mut stage = rho.clone();
        stage
            .data_mut()
            .zip_mut_with(&k1, |r, k| *r += k * (0.5 * dt));
        let k2 = ops.apply_liouvillian(&stage)?;
        let mut stage2 = rho.clone();
        stage2
            .data_mut()
            .zip_mut_with(&k2, |r, k| *r += k * (0.5 * dt));
        let k3 = ops.apply_liouvillian(&stage2)?;
        let mut stage3 = rho.clone();
        stage3.data_mut().zip_mut_with(&k3, |r, k| *r += k * dt);
        let k4 = ops.apply_liouvillian(&stage3)?;

        {
            let data = rho.data_mut();
            let w = dt / 6.0;
            ndarray::Zip::from(&mut *data)
                .and(&k1)
                .and(&k2)
                .and(&k3)
                .and(&k4)
                .for_each(|r, &a, &b, &c, &d| {
                    *r += (a + 2.0 * b + 2.0 * c + d) * w;
                });
        }

        let raw_residue = rho.hermiticity_residue();
        rho.hermitize();

        let ratio = rho.frobenius() / norm0;
        if !ratio.is_finite() || ratio > 10.0 {
            return Err(QuantumError::Instability { step, ratio });
        }

        records.push(record(&rho, step, raw_residue, &mut monitors));
        if options.snapshot_every > 0 && step % options.snapshot_every == 0 && step != steps {
            snapshots.push((step as f64 * dt, rho.clone()));
        }
    }

    snapshots.push((steps as f64 * dt, rho.clone()));
    Ok(Evolution {
        final_state: rho,
        records,
        snapshots,
        monitors,
    })
}

/// Analytic pure-dephasing solution in the infinite-mass limit.
///
/// Requires `kinetic == KineticMode::Frozen` and exactly one channel in the
/// operator.  A diagonal potential only contributes the exact phase factor
/// exp(-i (V(x) - V(x')) t / hbar), which is included.
pub fn dephasing_closed_form(
    spec: &LiouvillianSpec,
    rho0: &DensityMatrix,
    basis: GridBasis,
    hbar: f64,
    t: f64,
    kinetic: KineticMode,
) -> Result<DensityMatrix> {
    if kinetic != KineticMode::Frozen {
        return Err(QuantumError::KineticEnabled);
    }
    if spec.decoherence.len() != 1 {
        return Err(QuantumError::NeedSingleChannel(spec.decoherence.len()));
    }
    let ops = build_operators(spec, basis, hbar, KineticMode::Frozen)?;
    if rho0.basis() != basis {
        return Err(QuantumError::DimensionMismatch {
            expected: basis.len(),
            found: rho0.basis().len(),
        });
    }
    let term = &spec.decoherence[0];
    let gamma = term
        .strength
        .to_f64()
        .ok_or_else(|| QuantumError::CoefficientOverflow(term.strength.to_string()))?;
    let g: Vec<f64> = basis
        .points()
        .iter()
        .map(|&x| term.generator.eval_f64(&[x]))
        .collect();
    let v = ops.potential();

    let m = basis.len();
    let mut rho = rho0.clone();
    let data = rho.data_mut();
    for i in 0..m {
        for j in 0..m {
            let dg = g[i] - g[j];
            let damp = (-(gamma / (hbar * hbar)) * dg * dg * t).exp();
            let phase = Complex64::new(0.0, -(v[i] - v[j]) * t / hbar).exp();
            data[[i, j]] *= phase * damp;
        }
    }
    Ok(rho)
}
