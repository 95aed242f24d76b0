use super::IndexSet;
use crate::error::SolveError;
use crate::linalg::{dot, norm2, solve_least_squares, solve_spd_small, LinalgError, Matrix};

/// A step is skipped when `||W^T r|| < STAGNATION_RTOL * ||r||`.
pub const STAGNATION_RTOL: f64 = 1e-15;

#[derive(Debug, Clone, PartialEq)]
pub struct StepOutcome {
    pub x_new: Vec<f64>,
    pub r_new: Vec<f64>,
    /// The m-vector added to the selected coordinates of `x`.
    pub correction: Vec<f64>,
    /// `E_m^T r` (orthogonal) or `(A E_m)^T r` (oblique), taken before the step.
    pub projected_residual: Vec<f64>,
    /// `||r||^2 - ||r_new||^2`.
    pub residual_drop_sq: f64,
    /// Change of the squared A-norm error (orthogonal steps only).
    pub er_value: Option<f64>,
}

fn check_lengths(a: &Matrix, x: &[f64], r: &[f64]) -> Result<(), SolveError> {
    if !a.is_square() {
        return Err(SolveError::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    for v in [x, r] {
        if v.len() != a.rows() {
            return Err(SolveError::LengthMismatch { expected: a.rows(), found: v.len() });
        }
    }
    Ok(())
}

fn apply_correction(
    w: &Matrix,
    idx: &IndexSet,
    x: &[f64],
    r: &[f64],
    y: &[f64],
) -> (Vec<f64>, Vec<f64>) {
    let mut x_new = x.to_vec();
    for (&i, &yi) in idx.as_slice().iter().zip(y) {
        x_new[i] += yi;
    }
    let wy = w.matvec(y).expect("correction has one entry per column");
    let r_new: Vec<f64> = r.iter().zip(&wy).map(|(ri, wi)| ri - wi).collect();
    (x_new, r_new)
}

/// Orthogonal projection step: `x_new = x + E_m z` with
/// `(E_m^T A E_m) z = E_m^T r`.
///
/// The error reduction `||x_new - x*||_A^2 - ||x - x*||_A^2` equals
/// `-(E_m^T r)^T z` and is reported without needing `x*`.
pub fn orthogonal_step(a: &Matrix, x: &[f64], r: &[f64], idx: &IndexSet) -> Result<StepOutcome, SolveError> {
    check_lengths(a, x, r)?;
    let cols = idx.as_slice();
    let projected = a.submatrix(cols, cols);
    let q: Vec<f64> = cols.iter().map(|&i| r[i]).collect();
    let z = solve_spd_small(&projected, &q).map_err(|e| match e {
        LinalgError::NotPositiveDefinite { pivot } => SolveError::NotSpd(format!(
            "projected matrix on indices {:?} has a non-positive pivot at position {}",
            idx.one_based(),
            pivot + 1
        )),
        other => other.into(),
    })?;
    let w = a.select_columns(cols);
    let (x_new, r_new) = apply_correction(&w, idx, x, r, &z);
    let er_value = -dot(&q, &z);
    Ok(StepOutcome {
        residual_drop_sq: dot(r, r) - dot(&r_new, &r_new),
        x_new,
        r_new,
        correction: z,
        projected_residual: q,
        er_value: Some(er_value),
    })
}

/// Oblique projection step with `W = A E_m`: `x_new = x + E_m y` where `y`
/// minimizes `||W y - r||_2`, so `r_new = r - W W^+ r`.
pub fn oblique_step(a: &Matrix, x: &[f64], r: &[f64], idx: &IndexSet) -> Result<StepOutcome, SolveError> {
    check_lengths(a, x, r)?;
    let w = a.select_columns(idx.as_slice());
    let g = w.matvec_transpose(r)?;
    let y = if norm2(&g) < STAGNATION_RTOL * norm2(r) {
        vec![0.0; idx.m()]
    } else {
        solve_least_squares(&w, r)?
    };
    let (x_new, r_new) = apply_correction(&w, idx, x, r, &y);
    Ok(StepOutcome {
        residual_drop_sq: dot(r, r) - dot(&r_new, &r_new),
        x_new,
        r_new,
        correction: y,
        projected_residual: g,
        er_value: None,
    })
}
