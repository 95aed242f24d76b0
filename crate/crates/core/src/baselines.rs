//! Reference solvers: CGNR, Craig's method (CGNE), GMRES and Gauss-Seidel.
//!
//! All of them start from `x = 0` and stop when an iteration moves `x` by
//! less than `stop_tol`, the same rule the projection solvers use, so
//! iteration counts are comparable.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::SolveError;
use crate::linalg::{axpy, dot, norm2, Matrix};
use crate::problems::ProblemInstance;
use crate::report::{IterationTrace, SolveReport, SweepRecord, Termination};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaselineMethod {
    Cgnr,
    Craig,
    Gmres,
    GaussSeidel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineConfig {
    pub method: BaselineMethod,
    pub stop_tol: f64,
    pub max_iter: usize,
    /// Restart length; `None` runs full GMRES.
    pub gmres_restart: Option<usize>,
}

impl BaselineConfig {
    pub fn new(method: BaselineMethod) -> Self {
        Self { method, stop_tol: 1e-12, max_iter: 10_000, gmres_restart: None }
    }

    pub fn with_stop_tol(mut self, tol: f64) -> Self {
        self.stop_tol = tol;
        self
    }

    pub fn with_max_iter(mut self, max_iter: usize) -> Self {
        self.max_iter = max_iter;
        self
    }

    pub fn with_restart(mut self, restart: Option<usize>) -> Self {
        self.gmres_restart = restart;
        self
    }

    pub fn label(&self) -> String {
        match (self.method, self.gmres_restart) {
            (BaselineMethod::Cgnr, _) => "CGNR".into(),
            (BaselineMethod::Craig, _) => "Craig".into(),
            (BaselineMethod::Gmres, None) => "GMRES".into(),
            (BaselineMethod::Gmres, Some(k)) => format!("GMRES({k})"),
            (BaselineMethod::GaussSeidel, _) => "Gauss-Seidel".into(),
        }
    }

    fn validate(&self, problem: &ProblemInstance) -> Result<(), SolveError> {
        if !(self.stop_tol.is_finite() && self.stop_tol > 0.0) {
            return Err(SolveError::InvalidConfig(format!("stop_tol must be positive, got {}", self.stop_tol)));
        }
        if self.max_iter == 0 {
            return Err(SolveError::InvalidConfig("max_iter must be positive".into()));
        }
        if self.gmres_restart == Some(0) {
            return Err(SolveError::InvalidConfig("GMRES restart must be positive".into()));
        }
        let a = problem.a();
        if !a.is_square() {
            return Err(SolveError::NotSquare { rows: a.rows(), cols: a.cols() });
        }
        Ok(())
    }
}

pub fn solve_baseline(problem: &ProblemInstance, config: &BaselineConfig) -> Result<SolveReport, SolveError> {
    match config.method {
        BaselineMethod::Cgnr => solve_cgnr(problem, config),
        BaselineMethod::Craig => solve_craig(problem, config),
        BaselineMethod::Gmres => solve_gmres(problem, config),
        BaselineMethod::GaussSeidel => solve_gauss_seidel(problem, config),
    }
}

/// Collects per-iteration records and assembles the final report.
struct Recorder {
    start: Instant,
    trace: IterationTrace,
}

impl Recorder {
    fn new() -> Self {
        Self { start: Instant::now(), trace: IterationTrace::default() }
    }

    fn record(&mut self, residual_norm: f64, step_norm: f64) {
        let iteration = self.trace.sweeps.len() + 1;
        self.trace.sweeps.push(SweepRecord {
            iteration,
            residual_norm,
            step_norm,
            last_step_norm: step_norm,
            er_values: Vec::new(),
        });
    }

    fn finish(
        self,
        problem: &ProblemInstance,
        config: &BaselineConfig,
        x: Vec<f64>,
        termination: Termination,
    ) -> SolveReport {
        let final_step_norm = self.trace.sweeps.last().map_or(0.0, |s| s.step_norm);
        SolveReport {
            solver_label: config.label(),
            iterations: self.trace.sweeps.len(),
            converged: matches!(termination, Termination::StepNorm | Termination::Exact),
            termination,
            final_residual: problem.residual_norm(&x),
            final_error: problem.error_norm(&x),
            final_step_norm,
            trace: self.trace,
            elapsed_seconds: self.start.elapsed().as_secs_f64(),
            solution: x,
        }
    }
}

/// Conjugate gradient on `A^T A x = A^T b`.
pub fn solve_cgnr(problem: &ProblemInstance, config: &BaselineConfig) -> Result<SolveReport, SolveError> {
    config.validate(problem)?;
    let a = problem.a();
    let mut rec = Recorder::new();
    let mut x = vec![0.0; problem.n()];
    let mut r = problem.b().to_vec();
    let mut z = a.matvec_transpose(&r)?;
    let mut zz = dot(&z, &z);
    if zz == 0.0 {
        return Ok(rec.finish(problem, config, x, Termination::Exact));
    }
    let mut p = z.clone();

    let mut termination = Termination::MaxIterations;
    for _ in 0..config.max_iter {
        let w = a.matvec(&p)?;
        let ww = dot(&w, &w);
        if ww == 0.0 {
            termination = Termination::Breakdown;
            break;
        }
        let alpha = zz / ww;
        axpy(alpha, &p, &mut x);
        axpy(-alpha, &w, &mut r);
        let step = alpha.abs() * norm2(&p);
        rec.record(norm2(&r), step);

        z = a.matvec_transpose(&r)?;
        let zz_new = dot(&z, &z);
        if zz_new == 0.0 {
            termination = Termination::Exact;
            break;
        }
        if step < config.stop_tol {
            termination = Termination::StepNorm;
            break;
        }
        let beta = zz_new / zz;
        zz = zz_new;
        for (pi, zi) in p.iter_mut().zip(&z) {
            *pi = zi + beta * *pi;
        }
    }
    Ok(rec.finish(problem, config, x, termination))
}

/// Craig's method: conjugate gradient on `A A^T u = b` with `x = A^T u`,
/// carried out directly on `x`.
pub fn solve_craig(problem: &ProblemInstance, config: &BaselineConfig) -> Result<SolveReport, SolveError> {
    config.validate(problem)?;
    let a = problem.a();
    let mut rec = Recorder::new();
    let mut x = vec![0.0; problem.n()];
    let mut r = problem.b().to_vec();
    let mut rr = dot(&r, &r);
    if rr == 0.0 {
        return Ok(rec.finish(problem, config, x, Termination::Exact));
    }
    let mut p = a.matvec_transpose(&r)?;

    let mut termination = Termination::MaxIterations;
    for _ in 0..config.max_iter {
        let pp = dot(&p, &p);
        if pp == 0.0 {
            termination = Termination::Breakdown;
            break;
        }
        let alpha = rr / pp;
        axpy(alpha, &p, &mut x);
        let ap = a.matvec(&p)?;
        axpy(-alpha, &ap, &mut r);
        let step = alpha.abs() * pp.sqrt();
        let rr_new = dot(&r, &r);
        rec.record(rr_new.sqrt(), step);

        if rr_new == 0.0 {
            termination = Termination::Exact;
            break;
        }
        if step < config.stop_tol {
            termination = Termination::StepNorm;
            break;
        }
        let beta = rr_new / rr;
        rr = rr_new;
        let atr = a.matvec_transpose(&r)?;
        for (pi, ti) in p.iter_mut().zip(&atr) {
            *pi = ti + beta * *pi;
        }
    }
    Ok(rec.finish(problem, config, x, termination))
}

fn givens(a: f64, b: f64) -> (f64, f64) {
    if b == 0.0 {
        (1.0, 0.0)
    } else {
        let h = a.hypot(b);
        (a / h, b / h)
    }
}

/// GMRES with modified Gram-Schmidt Arnoldi and Givens rotations. The
/// iterate is formed at every step so the step-norm rule can be applied.
pub fn solve_gmres(problem: &ProblemInstance, config: &BaselineConfig) -> Result<SolveReport, SolveError> {
    config.validate(problem)?;
    let a = problem.a();
    let n = problem.n();
    let b = problem.b();
    let restart = config.gmres_restart.unwrap_or(n).min(n);
    let mut rec = Recorder::new();
    let mut x = vec![0.0; n];
    let mut x_prev = x.clone();
    let mut termination = Termination::MaxIterations;

    'outer: while rec.trace.sweeps.len() < config.max_iter {
        let ax = a.matvec(&x)?;
        let r0: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let beta = norm2(&r0);
        if beta == 0.0 {
            termination = Termination::Exact;
            break;
        }
        let x0 = x.clone();
        let mut basis: Vec<Vec<f64>> = vec![r0.iter().map(|v| v / beta).collect()];
        // Columns of the rotated Hessenberg matrix, i.e. R stored by column.
        let mut r_cols: Vec<Vec<f64>> = Vec::with_capacity(restart);
        let mut rotations: Vec<(f64, f64)> = Vec::with_capacity(restart);
        let mut g = vec![beta];

        for k in 0..restart {
            let mut w = a.matvec(&basis[k])?;
            let w_norm_before = norm2(&w);
            let mut h = vec![0.0; k + 2];
            for (j, q) in basis.iter().enumerate() {
                h[j] = dot(&w, q);
                axpy(-h[j], q, &mut w);
            }
            h[k + 1] = norm2(&w);
            let h_next = h[k + 1];
            let happy = h[k + 1] <= 1e-14 * w_norm_before || basis.len() == n;

            for (j, &(c, s)) in rotations.iter().enumerate() {
                let (hj, hj1) = (h[j], h[j + 1]);
                h[j] = c * hj + s * hj1;
                h[j + 1] = -s * hj + c * hj1;
            }
            let (c, s) = givens(h[k], h[k + 1]);
            h[k] = c * h[k] + s * h[k + 1];
            h[k + 1] = 0.0;
            rotations.push((c, s));
            g.push(-s * g[k]);
            g[k] *= c;
            h.truncate(k + 1);
            r_cols.push(h);

            if r_cols[k][k] == 0.0 {
                termination = Termination::Breakdown;
                break 'outer;
            }
            // Back-substitution for the least-squares coefficients.
            let mut y = g[..=k].to_vec();
            for i in (0..=k).rev() {
                let s: f64 = ((i + 1)..=k).map(|j| r_cols[j][i] * y[j]).sum();
                y[i] = (y[i] - s) / r_cols[i][i];
            }
            x.copy_from_slice(&x0);
            for (yi, q) in y.iter().zip(&basis) {
                axpy(*yi, q, &mut x);
            }
            let step = norm2(&x.iter().zip(&x_prev).map(|(a, b)| a - b).collect::<Vec<_>>());
            x_prev.copy_from_slice(&x);
            rec.record(g[k + 1].abs(), step);

            if happy {
                termination = Termination::Exact;
                break 'outer;
            }
            if step < config.stop_tol {
                termination = Termination::StepNorm;
                break 'outer;
            }
            if rec.trace.sweeps.len() >= config.max_iter {
                break 'outer;
            }
            basis.push(w.iter().map(|v| v / h_next).collect());
        }
    }
    Ok(rec.finish(problem, config, x, termination))
}

/// Forward Gauss-Seidel sweeps.
pub fn solve_gauss_seidel(problem: &ProblemInstance, config: &BaselineConfig) -> Result<SolveReport, SolveError> {
    config.validate(problem)?;
    let a: &Matrix = problem.a();
    let b = problem.b();
    let n = problem.n();
    if let Some(row) = (0..n).find(|&i| a[(i, i)] == 0.0) {
        return Err(SolveError::ZeroDiagonal { row });
    }
    let mut rec = Recorder::new();
    let mut x = vec![0.0; n];
    let mut termination = Termination::MaxIterations;
    for _ in 0..config.max_iter {
        let mut step_sq = 0.0;
        for i in 0..n {
            let row = a.row(i);
            let off: f64 = dot(row, &x) - row[i] * x[i];
            let xi = (b[i] - off) / row[i];
            step_sq += (xi - x[i]) * (xi - x[i]);
            x[i] = xi;
        }
        let residual = problem.residual_norm(&x);
        let step = step_sq.sqrt();
        rec.record(residual, step);
        if residual == 0.0 {
            termination = Termination::Exact;
            break;
        }
        if step < config.stop_tol {
            termination = Termination::StepNorm;
            break;
        }
    }
    Ok(rec.finish(problem, config, x, termination))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_methods() -> [BaselineMethod; 4] {
        [BaselineMethod::Cgnr, BaselineMethod::Craig, BaselineMethod::Gmres, BaselineMethod::GaussSeidel]
    }

    #[test]
    fn identity_in_one_iteration() {
        let p = ProblemInstance::with_solution(Matrix::identity(5), vec![1.0, -2.0, 3.0, 0.0, 4.0], "id").unwrap();
        for method in all_methods() {
            let rep = solve_baseline(&p, &BaselineConfig::new(method)).unwrap();
            assert!(rep.converged, "{method:?}");
            assert_eq!(rep.iterations, 1, "{method:?}");
            assert!(rep.final_residual <= 1e-15);
        }
    }

    #[test]
    fn zero_rhs_needs_no_iterations() {
        let a = Matrix::from_rows(&[[2.0, 1.0], [1.0, 3.0]]).unwrap();
        let p = ProblemInstance::new(a, vec![0.0, 0.0], Some(vec![0.0, 0.0]), "zero").unwrap();
        for method in [BaselineMethod::Cgnr, BaselineMethod::Craig, BaselineMethod::Gmres] {
            let rep = solve_baseline(&p, &BaselineConfig::new(method)).unwrap();
            assert!(rep.converged);
            assert_eq!(rep.iterations, 0);
        }
    }

    #[test]
    fn gauss_seidel_diagonal_system() {
        let p = ProblemInstance::new(Matrix::from_diagonal(&[2.0, 1.0]), vec![2.0, 1.0], None, "diag").unwrap();
        let rep = solve_gauss_seidel(&p, &BaselineConfig::new(BaselineMethod::GaussSeidel)).unwrap();
        assert_eq!(rep.solution, vec![1.0, 1.0]);
        assert_eq!(rep.iterations, 1);
    }

    #[test]
    fn gauss_seidel_zero_diagonal() {
        let a = Matrix::from_rows(&[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let p = ProblemInstance::with_ones_solution(a, "swap").unwrap();
        assert_eq!(
            solve_gauss_seidel(&p, &BaselineConfig::new(BaselineMethod::GaussSeidel)).unwrap_err(),
            SolveError::ZeroDiagonal { row: 0 }
        );
    }

    #[test]
    fn nonsymmetric_system_all_krylov_methods() {
        let a = Matrix::from_rows(&[[4.0, -1.0, 0.5], [2.0, 5.0, 1.0], [0.0, -3.0, 6.0]]).unwrap();
        let p = ProblemInstance::with_solution(a, vec![1.0, 2.0, -1.0], "ns").unwrap();
        for method in [BaselineMethod::Cgnr, BaselineMethod::Craig, BaselineMethod::Gmres] {
            let rep = solve_baseline(&p, &BaselineConfig::new(method)).unwrap();
            assert!(rep.converged, "{method:?}");
            assert!(rep.final_error.unwrap() < 1e-12, "{method:?}: {:?}", rep.final_error);
        }
        let rep = solve_gmres(&p, &BaselineConfig::new(BaselineMethod::Gmres)).unwrap();
        assert!(rep.iterations <= 3);
    }

    #[test]
    fn restarted_gmres_converges() {
        let n = 30;
        let a = Matrix::from_fn(n, n, |i, j| {
            if i == j {
                4.0
            } else if j == i + 1 {
                -1.0
            } else if i == j + 1 {
                -1.5
            } else {
                0.0
            }
        });
        let p = ProblemInstance::with_ones_solution(a, "tridiag").unwrap();
        let rep = solve_gmres(&p, &BaselineConfig::new(BaselineMethod::Gmres).with_restart(Some(5))).unwrap();
        assert!(rep.converged);
        assert_eq!(rep.solver_label, "GMRES(5)");
        assert!(rep.final_residual < 1e-10);
    }

    #[test]
    fn max_iter_reports_non_convergence() {
        let a = Matrix::from_fn(10, 10, |i, j| 1.0 / (1.0 + i as f64 + j as f64) + if i == j { 1.0 } else { 0.0 });
        let p = ProblemInstance::with_ones_solution(a, "h").unwrap();
        for method in all_methods() {
            let rep = solve_baseline(&p, &BaselineConfig::new(method).with_max_iter(1)).unwrap();
            assert!(!rep.converged, "{method:?}");
            assert_eq!(rep.termination, Termination::MaxIterations);
            assert_eq!(rep.iterations, 1);
        }
    }
}
