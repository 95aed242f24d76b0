//! Dense vector and matrix kernels, small direct solves and singular value
//! extremes.

mod matrix;
mod qr;
mod sparse;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use matrix::Matrix;
pub use qr::{householder_qr, solve_least_squares, PIVOT_RTOL};
pub use sparse::CsrMatrix;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("matrix shape {rows}x{cols} has an empty dimension")]
    EmptyShape { rows: usize, cols: usize },
    #[error("{op}: dimension mismatch, expected {expected}, found {found}")]
    DimensionMismatch {
        op: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("entry ({row}, {col}) outside a {rows}x{cols} matrix")]
    IndexOutOfBounds {
        row: usize,
        col: usize,
        rows: usize,
        cols: usize,
    },
    #[error("expected a square matrix, found {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not positive definite (pivot {pivot} is not positive)")]
    NotPositiveDefinite { pivot: usize },
}

#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm2(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `y += alpha * x`
#[inline]
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `A x`; see [`Matrix::matvec`].
pub fn matvec(a: &Matrix, x: &[f64]) -> Result<Vec<f64>, LinalgError> {
    a.matvec(x)
}

/// `B = L D L^T` factorization of a symmetric positive definite matrix,
/// returned as unit lower `L` with `D` on its diagonal. Only the lower
/// triangle of `b` is read.
pub fn ldlt(b: &Matrix) -> Result<Matrix, LinalgError> {
    if !b.is_square() {
        return Err(LinalgError::NotSquare { rows: b.rows(), cols: b.cols() });
    }
    let n = b.rows();
    let mut f = Matrix::zeros(n, n);
    for j in 0..n {
        let d = b[(j, j)] - (0..j).map(|k| f[(j, k)] * f[(j, k)] * f[(k, k)]).sum::<f64>();
        if !(d.is_finite() && d > 0.0) {
            return Err(LinalgError::NotPositiveDefinite { pivot: j });
        }
        f[(j, j)] = d;
        for i in (j + 1)..n {
            let s = b[(i, j)] - (0..j).map(|k| f[(i, k)] * f[(j, k)] * f[(k, k)]).sum::<f64>();
            f[(i, j)] = s / d;
        }
    }
    Ok(f)
}

/// Solves `B z = q` for a small symmetric positive definite `B` by `LDL^T`.
pub fn solve_spd_small(b: &Matrix, q: &[f64]) -> Result<Vec<f64>, LinalgError> {
    if q.len() != b.rows() {
        return Err(LinalgError::DimensionMismatch {
            op: "solve_spd_small",
            expected: b.rows(),
            found: q.len(),
        });
    }
    let f = ldlt(b)?;
    let n = q.len();
    let mut z = q.to_vec();
    for i in 0..n {
        let s: f64 = (0..i).map(|k| f[(i, k)] * z[k]).sum();
        z[i] -= s;
    }
    for i in 0..n {
        z[i] /= f[(i, i)];
    }
    for i in (0..n).rev() {
        let s: f64 = ((i + 1)..n).map(|k| f[(k, i)] * z[k]).sum();
        z[i] -= s;
    }
    Ok(z)
}

/// Largest and smallest singular values of a matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralBounds {
    pub sigma_max: f64,
    pub sigma_min: f64,
}

impl SpectralBounds {
    pub fn condition_number(&self) -> f64 {
        self.sigma_max / self.sigma_min
    }
}

/// Singular value extremes of a square matrix via a full SVD.
pub fn singular_extremes(a: &Matrix) -> Result<SpectralBounds, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let sv = singular_values(a);
    Ok(SpectralBounds {
        sigma_max: sv[0],
        sigma_min: *sv.last().expect("matrix is non-empty"),
    })
}

/// All singular values, sorted decreasingly.
pub fn singular_values(a: &Matrix) -> Vec<f64> {
    let m = nalgebra::DMatrix::from_row_slice(a.rows(), a.cols(), a.as_slice());
    let mut sv: Vec<f64> = m.singular_values().iter().copied().collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    sv
}

/// Eigenvalues of a symmetric matrix, sorted increasingly.
pub fn symmetric_eigenvalues(a: &Matrix) -> Result<Vec<f64>, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let m = nalgebra::DMatrix::from_row_slice(a.rows(), a.cols(), a.as_slice());
    let mut ev: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    Ok(ev)
}

/// `v^T A v`, the squared A-norm of `v`.
pub fn a_norm_sq(a: &Matrix, v: &[f64]) -> Result<f64, LinalgError> {
    if !a.is_square() {
        return Err(LinalgError::NotSquare { rows: a.rows(), cols: a.cols() });
    }
    let av = a.matvec(v)?;
    Ok(dot(v, &av).max(0.0))
}
