//! Fourth-order central difference stencils for momentum derivatives.
//!
//! The seven-point third- and fourth-derivative stencils keep the spatial
//! truncation error O(Δp⁴), well below the O(ħ⁴) dynamical residuals the
//! evolution tests measure.  All stencils have zero coefficient sum, so the
//! corrections they drive conserve the field sum exactly in the interior.

/// f′ at `i` to fourth order (five points).
pub(crate) fn d1(f: &[f64], i: usize, h: f64) -> f64 {
    (f[i - 2] - 8.0 * f[i - 1] + 8.0 * f[i + 1] - f[i + 2]) / (12.0 * h)
}

/// f″ at `i` to fourth order (five points).
pub(crate) fn d2(f: &[f64], i: usize, h: f64) -> f64 {
    (-f[i - 2] + 16.0 * f[i - 1] - 30.0 * f[i] + 16.0 * f[i + 1] - f[i + 2]) / (12.0 * h * h)
}

/// f‴ at `i` to fourth order (seven points).
pub(crate) fn d3(f: &[f64], i: usize, h: f64) -> f64 {
    (f[i - 3] - 8.0 * f[i - 2] + 13.0 * f[i - 1] - 13.0 * f[i + 1] + 8.0 * f[i + 2] - f[i + 3])
        / (8.0 * h * h * h)
}

/// f⁗ at `i` to fourth order (seven points).
pub(crate) fn d4(f: &[f64], i: usize, h: f64) -> f64 {
    (-f[i - 3] + 12.0 * f[i - 2] - 39.0 * f[i - 1] + 56.0 * f[i] - 39.0 * f[i + 1]
        + 12.0 * f[i + 2]
        - f[i + 3])
        / (6.0 * h * h * h * h)
}

/// L1 norm of the f‴ stencil, 44/8: explicit-step amplification bound.
pub(crate) const D3_L1: f64 = 5.5;

/// L1 norm of the f⁗ stencil, 160/6.
pub(crate) const D4_L1: f64 = 160.0 / 6.0;
