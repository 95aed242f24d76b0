use thiserror::Error;

use crate::linalg::LinalgError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("system matrix must be square, found {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("subspace dimension m = {m} must satisfy 1 <= m <= n = {n}")]
    InvalidSubspaceDimension { m: usize, n: usize },
    #[error("index {index} out of range for n = {n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("index set must be non-empty and free of duplicates")]
    InvalidIndexSet,
    #[error("vector length {found} does not match system size {expected}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("orthogonal projection requires a symmetric positive definite matrix: {0}")]
    NotSpd(String),
    #[error("matrix is numerically singular (sigma_min / sigma_max = {ratio:e})")]
    Singular { ratio: f64 },
    #[error("zero diagonal entry at row {row}")]
    ZeroDiagonal { row: usize },
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}
