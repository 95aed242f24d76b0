//! Runtime checks of the per-step residual bounds for the oblique method.

use crate::error::SolveError;
use crate::linalg::{dot, singular_extremes, Matrix, SpectralBounds};

/// Relative slack (times `||r_before||^2`) allowed before a bound counts as
/// violated.
pub const BOUND_SLACK: f64 = 1e-8;

/// Below this `sigma_min / sigma_max` a matrix is treated as singular.
const SINGULAR_RTOL: f64 = 1e-14;

/// Worst-case squared residual contraction `1 - sigma_min^2 / sigma_max^2`.
pub fn contraction_bound(a: &Matrix) -> Result<f64, SolveError> {
    let s = singular_extremes(a)?;
    contraction_from_extremes(&s)
}

pub(crate) fn contraction_from_extremes(s: &SpectralBounds) -> Result<f64, SolveError> {
    if s.sigma_max == 0.0 || s.sigma_min.is_nan() || s.sigma_min < SINGULAR_RTOL * s.sigma_max {
        let ratio = if s.sigma_max > 0.0 { s.sigma_min / s.sigma_max } else { 0.0 };
        return Err(SolveError::Singular { ratio });
    }
    let ratio = s.sigma_min / s.sigma_max;
    Ok((1.0 - ratio * ratio).max(0.0))
}

/// Residual-drop lower bound: `||r||^2 - ||r_next||^2 >= ||y||^2 / sigma_max^2`
/// with `y = (A E_m)^T r`.
pub fn check_step_bound(extremes: &SpectralBounds, r_before: &[f64], r_after: &[f64], y: &[f64]) -> bool {
    let before = dot(r_before, r_before);
    let drop = before - dot(r_after, r_after);
    let required = dot(y, y) / (extremes.sigma_max * extremes.sigma_max);
    drop >= required - BOUND_SLACK * before
}

/// Contraction check: `||r_after||^2 <= factor * ||r_before||^2`.
pub fn check_contraction(factor: f64, r_before: &[f64], r_after: &[f64]) -> bool {
    let before = dot(r_before, r_before);
    dot(r_after, r_after) <= factor * before + BOUND_SLACK * before
}
