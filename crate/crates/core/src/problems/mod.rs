//! Linear system instances: the experiment generators, seeded random
//! factories and MatrixMarket ingestion.

mod generators;
pub mod matrix_market;

use thiserror::Error;

use crate::linalg::{norm2, sub, LinalgError, Matrix};

pub use generators::{
    gen_hankel, gen_prescribed_singular, gen_random_nonsingular, gen_random_spd,
    prescribed_singular_values, random_orthogonal,
};
pub use matrix_market::{read_matrix_market, write_matrix_market, MatrixMarketError, MmFormat};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProblemError {
    #[error("problem size must be positive")]
    EmptyProblem,
    #[error("system matrix must be square, found {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("right-hand side has length {found}, expected {expected}")]
    RhsLength { expected: usize, found: usize },
    #[error("exact solution has length {found}, expected {expected}")]
    SolutionLength { expected: usize, found: usize },
    #[error("exact solution does not satisfy the system: ||A x* - b|| = {residual:e}")]
    InconsistentSolution { residual: f64 },
    #[error("invalid generator parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// A square system `A x = b`, optionally with its known exact solution.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemInstance {
    a: Matrix,
    b: Vec<f64>,
    x_star: Option<Vec<f64>>,
    label: String,
}

impl ProblemInstance {
    pub fn new(
        a: Matrix,
        b: Vec<f64>,
        x_star: Option<Vec<f64>>,
        label: impl Into<String>,
    ) -> Result<Self, ProblemError> {
        if !a.is_square() {
            return Err(ProblemError::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        if b.len() != a.rows() {
            return Err(ProblemError::RhsLength { expected: a.rows(), found: b.len() });
        }
        if let Some(xs) = &x_star {
            if xs.len() != a.cols() {
                return Err(ProblemError::SolutionLength { expected: a.cols(), found: xs.len() });
            }
            let residual = norm2(&sub(&a.matvec(xs)?, &b));
            if residual > 1e-10 * norm2(&b) {
                return Err(ProblemError::InconsistentSolution { residual });
            }
        }
        Ok(Self { a, b, x_star, label: label.into() })
    }

    /// Builds `b = A x*` so the exact solution is known.
    pub fn with_solution(a: Matrix, x_star: Vec<f64>, label: impl Into<String>) -> Result<Self, ProblemError> {
        if !a.is_square() {
            return Err(ProblemError::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        let b = a.matvec(&x_star)?;
        Ok(Self { a, b, x_star: Some(x_star), label: label.into() })
    }

    /// `b = A * (1, ..., 1)`.
    pub fn with_ones_solution(a: Matrix, label: impl Into<String>) -> Result<Self, ProblemError> {
        let n = a.cols();
        Self::with_solution(a, vec![1.0; n], label)
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn x_star(&self) -> Option<&[f64]> {
        self.x_star.as_deref()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn n(&self) -> usize {
        self.a.rows()
    }

    /// `||b - A x||_2` computed from scratch.
    pub fn residual_norm(&self, x: &[f64]) -> f64 {
        let ax = self.a.matvec(x).expect("iterate length matches the system");
        norm2(&sub(&self.b, &ax))
    }

    pub fn error_norm(&self, x: &[f64]) -> Option<f64> {
        self.x_star.as_ref().map(|xs| norm2(&sub(x, xs)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validates_dimensions() {
        let a = Matrix::identity(2);
        assert!(matches!(
            ProblemInstance::new(a.clone(), vec![1.0], None, "x"),
            Err(ProblemError::RhsLength { .. })
        ));
        assert!(matches!(
            ProblemInstance::new(Matrix::zeros(2, 3), vec![1.0, 1.0], None, "x"),
            Err(ProblemError::NotSquare { .. })
        ));
        assert!(matches!(
            ProblemInstance::new(a.clone(), vec![1.0, 1.0], Some(vec![1.0, 2.0]), "x"),
            Err(ProblemError::InconsistentSolution { .. })
        ));
        let p = ProblemInstance::new(a, vec![1.0, 2.0], Some(vec![1.0, 2.0]), "ok").unwrap();
        assert_eq!(p.residual_norm(&[1.0, 2.0]), 0.0);
        assert_eq!(p.error_norm(&[1.0, 0.0]), Some(2.0));
    }
}
