use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use super::{ProblemError, ProblemInstance};
use crate::linalg::{householder_qr, singular_extremes, Matrix};

fn gaussian_matrix<R: Rng>(rows: usize, cols: usize, rng: &mut R) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.sample(StandardNormal))
}

/// Haar-distributed orthogonal matrix: the Q factor of a Gaussian matrix,
/// with column signs fixed so that `R` has a positive diagonal.
pub fn random_orthogonal<R: Rng>(n: usize, rng: &mut R) -> Matrix {
    let g = gaussian_matrix(n, n, rng);
    let (mut q, r) = householder_qr(&g);
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            for i in 0..n {
                q[(i, j)] = -q[(i, j)];
            }
        }
    }
    q
}

fn scale_columns(a: &Matrix, d: &[f64]) -> Matrix {
    Matrix::from_fn(a.rows(), a.cols(), |i, j| a[(i, j)] * d[j])
}

/// Hankel test matrix `A(i, j) = 0.5 / (n - i - j + 1.5)` (1-based indices)
/// with `b = A * ones`.
pub fn gen_hankel(n: usize) -> Result<ProblemInstance, ProblemError> {
    if n == 0 {
        return Err(ProblemError::EmptyProblem);
    }
    let nf = n as f64;
    let a = Matrix::from_fn(n, n, |i, j| 0.5 / (nf - (i + 1) as f64 - (j + 1) as f64 + 1.5));
    ProblemInstance::with_ones_solution(a, format!("hankel-{n}"))
}

/// `1 + 10^-i` for `i = 1..=n`. Entries beyond roughly `i = 16` round to 1.
pub fn prescribed_singular_values(n: usize) -> Vec<f64> {
    (1..=n).map(|i| 1.0 + 10f64.powi(-(i as i32))).collect()
}

/// `A = U diag(1 + 10^-i) V^T` with seeded random orthogonal `U`, `V`.
pub fn gen_prescribed_singular(n: usize, seed: u64) -> Result<ProblemInstance, ProblemError> {
    if n == 0 {
        return Err(ProblemError::EmptyProblem);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = random_orthogonal(n, &mut rng);
    let v = random_orthogonal(n, &mut rng);
    let a = scale_columns(&u, &prescribed_singular_values(n)).matmul(&v.transpose())?;
    ProblemInstance::with_ones_solution(a, format!("prescribed-{n}-{seed}"))
}

/// SPD matrix `Q^T D Q` with eigenvalues log-spaced in `[1, cond_target]`.
pub fn gen_random_spd(n: usize, cond_target: f64, seed: u64) -> Result<ProblemInstance, ProblemError> {
    if n == 0 {
        return Err(ProblemError::EmptyProblem);
    }
    if !(cond_target.is_finite() && cond_target >= 1.0) {
        return Err(ProblemError::InvalidParameter(format!(
            "condition target must be a finite value >= 1, got {cond_target}"
        )));
    }
    let label = format!("spd-{n}-{cond_target}-{seed}");
    if cond_target == 1.0 {
        return ProblemInstance::with_ones_solution(Matrix::identity(n), label);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let q = random_orthogonal(n, &mut rng);
    let d: Vec<f64> = if n == 1 {
        vec![1.0]
    } else {
        (0..n).map(|k| cond_target.powf(k as f64 / (n - 1) as f64)).collect()
    };
    let qt = q.transpose();
    let a = scale_columns(&qt, &d).matmul(&q)?;
    // Symmetrize so the result is exactly symmetric.
    let a = Matrix::from_fn(n, n, |i, j| 0.5 * (a[(i, j)] + a[(j, i)]));
    ProblemInstance::with_ones_solution(a, label)
}

/// Standard-normal matrix, redrawn from the same stream until
/// `sigma_min / sigma_max >= min_ratio`.
pub fn gen_random_nonsingular(n: usize, seed: u64, min_ratio: f64) -> Result<ProblemInstance, ProblemError> {
    if n == 0 {
        return Err(ProblemError::EmptyProblem);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    loop {
        let a = gaussian_matrix(n, n, &mut rng);
        let s = singular_extremes(&a)?;
        if s.sigma_min >= min_ratio * s.sigma_max && s.sigma_min > 0.0 {
            return ProblemInstance::with_ones_solution(a, format!("gaussian-{n}-{seed}"));
        }
    }
}
