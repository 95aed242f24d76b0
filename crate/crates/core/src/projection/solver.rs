use std::time::Instant;

use super::bounds::{check_contraction, check_step_bound, contraction_from_extremes};
use super::select::{cyclic_indices, greedy_indices};
use super::step::{oblique_step, orthogonal_step};
use super::{IndexStrategy, Method, SolverConfig, StopRule};
use crate::error::SolveError;
use crate::linalg::{norm2, singular_extremes, sub};
use crate::problems::ProblemInstance;
use crate::report::{BoundViolation, IterationTrace, SolveReport, SweepRecord, Termination};

/// Relative slack for the sign of the error reduction on the orthogonal path.
const ER_SLACK: f64 = 1e-10;

fn validate(problem: &ProblemInstance, config: &SolverConfig) -> Result<(), SolveError> {
    let n = problem.n();
    if config.m == 0 || config.m > n {
        return Err(SolveError::InvalidSubspaceDimension { m: config.m, n });
    }
    if !(config.stop_tol.is_finite() && config.stop_tol > 0.0) {
        return Err(SolveError::InvalidConfig(format!("stop_tol must be positive, got {}", config.stop_tol)));
    }
    if config.max_outer == 0 {
        return Err(SolveError::InvalidConfig("max_outer must be positive".into()));
    }
    let a = problem.a();
    if config.method == Method::Orthogonal && !a.is_symmetric(1e-12 * a.frobenius_norm()) {
        return Err(SolveError::NotSpd("matrix is not symmetric".into()));
    }
    Ok(())
}

/// Runs outer sweeps of `n` projection steps each, starting from `x = 0`.
///
/// Indices are re-selected before every inner step. Greedy selection ranks
/// coordinates by the gradient of the quantity the step minimizes: `A^T r`
/// for the oblique method, `r` for the orthogonal one.
pub fn solve(problem: &ProblemInstance, config: &SolverConfig) -> Result<SolveReport, SolveError> {
    validate(problem, config)?;
    let start = Instant::now();
    let a = problem.a();
    let n = problem.n();
    let m = config.m;

    let oblique_bounds = if config.check_bounds && config.method == Method::Oblique {
        let s = singular_extremes(a)?;
        Some((s, contraction_from_extremes(&s)?))
    } else {
        None
    };

    let mut x = vec![0.0; n];
    let mut r = problem.b().to_vec();
    let mut trace = IterationTrace::default();
    let mut step_counter = 0usize;
    let mut iterations = 0;
    let mut final_step_norm = f64::INFINITY;
    let mut termination = Termination::MaxIterations;

    for sweep in 1..=config.max_outer {
        let x_before = x.clone();
        let mut er_values = Vec::new();
        let mut last_step_norm = 0.0;

        for i in 0..n {
            step_counter += 1;
            let idx = match (config.index_strategy, config.method) {
                (IndexStrategy::Cyclic, _) => cyclic_indices(n, m, i)?,
                (IndexStrategy::Greedy, Method::Oblique) => greedy_indices(&a.matvec_transpose(&r)?, m)?,
                (IndexStrategy::Greedy, Method::Orthogonal) => greedy_indices(&r, m)?,
            };
            let out = match config.method {
                Method::Orthogonal => orthogonal_step(a, &x, &r, &idx)?,
                Method::Oblique => oblique_step(a, &x, &r, &idx)?,
            };

            if let Some((extremes, factor)) = &oblique_bounds {
                if !check_step_bound(extremes, &r, &out.r_new, &out.projected_residual) {
                    trace.bound_violations.push(BoundViolation {
                        step: step_counter,
                        description: format!(
                            "residual drop {:e} below ||W^T r||^2 / sigma_max^2 = {:e}",
                            out.residual_drop_sq,
                            norm2(&out.projected_residual).powi(2) / extremes.sigma_max.powi(2)
                        ),
                    });
                }
                if !check_contraction(*factor, &r, &out.r_new) {
                    trace.bound_violations.push(BoundViolation {
                        step: step_counter,
                        description: format!(
                            "||r_new||^2 / ||r||^2 = {:.6} exceeds contraction factor {:.6} on indices {:?}",
                            norm2(&out.r_new).powi(2) / norm2(&r).powi(2),
                            factor,
                            idx.one_based()
                        ),
                    });
                }
            }
            if let Some(er) = out.er_value {
                let scale = norm2(&out.projected_residual) * norm2(&out.correction);
                if config.check_bounds && er > ER_SLACK * scale {
                    trace.bound_violations.push(BoundViolation {
                        step: step_counter,
                        description: format!("positive error reduction {er:e}"),
                    });
                }
                er_values.push(er);
            }

            last_step_norm = norm2(&out.correction);
            x = out.x_new;
            r = out.r_new;
        }

        let step_norm = norm2(&sub(&x, &x_before));
        trace.sweeps.push(SweepRecord {
            iteration: sweep,
            residual_norm: norm2(&r),
            step_norm,
            last_step_norm,
            er_values,
        });
        iterations = sweep;
        final_step_norm = match config.stop_rule {
            StopRule::LastInnerStep => last_step_norm,
            StopRule::SweepDifference => step_norm,
        };
        if final_step_norm < config.stop_tol {
            termination = Termination::StepNorm;
            break;
        }
    }

    Ok(SolveReport {
        solver_label: config.label(),
        iterations,
        converged: termination == Termination::StepNorm,
        termination,
        final_residual: problem.residual_norm(&x),
        final_error: problem.error_norm(&x),
        final_step_norm,
        trace,
        elapsed_seconds: start.elapsed().as_secs_f64(),
        solution: x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    #[test]
    fn identity_converges_on_second_sweep() {
        let p = ProblemInstance::with_solution(Matrix::identity(4), vec![3.0, -1.0, 2.0, 0.5], "id").unwrap();
        for strategy in [IndexStrategy::Greedy, IndexStrategy::Cyclic] {
            for config in [SolverConfig::oblique(1), SolverConfig::orthogonal(1)] {
                let rep = solve(&p, &config.with_strategy(strategy)).unwrap();
                assert!(rep.converged);
                assert_eq!(rep.iterations, 2);
                assert_eq!(rep.trace.sweeps[0].residual_norm, 0.0);
                assert_eq!(rep.trace.sweeps[1].step_norm, 0.0);
                assert_eq!(rep.solution, vec![3.0, -1.0, 2.0, 0.5]);
            }
        }
    }

    #[test]
    fn rejects_bad_configs() {
        let p = ProblemInstance::with_ones_solution(Matrix::identity(3), "id").unwrap();
        assert_eq!(
            solve(&p, &SolverConfig::oblique(4)).unwrap_err(),
            SolveError::InvalidSubspaceDimension { m: 4, n: 3 }
        );
        assert!(matches!(solve(&p, &SolverConfig::oblique(0)), Err(SolveError::InvalidSubspaceDimension { .. })));
        assert!(matches!(
            solve(&p, &SolverConfig::oblique(1).with_stop_tol(0.0)),
            Err(SolveError::InvalidConfig(_))
        ));
        let ns = ProblemInstance::with_ones_solution(Matrix::from_rows(&[[1.0, 2.0], [0.0, 1.0]]).unwrap(), "ns")
            .unwrap();
        assert!(matches!(solve(&ns, &SolverConfig::orthogonal(1)), Err(SolveError::NotSpd(_))));
        let indefinite =
            ProblemInstance::with_ones_solution(Matrix::from_rows(&[[1.0, 2.0], [2.0, 1.0]]).unwrap(), "ind")
                .unwrap();
        assert!(matches!(solve(&indefinite, &SolverConfig::orthogonal(2)), Err(SolveError::NotSpd(_))));
    }

    #[test]
    fn max_outer_is_respected() {
        let a = Matrix::from_rows(&[[4.0, 1.0, 0.0], [1.0, 4.0, 1.0], [0.0, 1.0, 4.0]]).unwrap();
        let p = ProblemInstance::with_ones_solution(a, "tri").unwrap();
        let rep = solve(&p, &SolverConfig::oblique(1).with_max_outer(1)).unwrap();
        assert_eq!(rep.iterations, 1);
        assert!(!rep.converged);
        assert_eq!(rep.termination, Termination::MaxIterations);
    }

    #[test]
    fn sweep_difference_rule_needs_at_least_as_many_sweeps() {
        let a = Matrix::from_fn(8, 8, |i, j| if i == j { 3.0 } else { 1.0 / (1.0 + (i + j) as f64) });
        let p = ProblemInstance::with_ones_solution(a, "dd").unwrap();
        let inner = solve(&p, &SolverConfig::oblique(2)).unwrap();
        let sweep = solve(&p, &SolverConfig::oblique(2).with_stop_rule(StopRule::SweepDifference)).unwrap();
        assert!(inner.converged && sweep.converged);
        assert!(sweep.iterations >= inner.iterations);
        assert!(sweep.final_step_norm < 1e-12);
    }

    #[test]
    fn orthogonal_trace_records_error_reductions() {
        let a = Matrix::from_rows(&[[4.0, 1.0, 0.0], [1.0, 4.0, 1.0], [0.0, 1.0, 4.0]]).unwrap();
        let p = ProblemInstance::with_ones_solution(a, "tri").unwrap();
        let rep = solve(&p, &SolverConfig::orthogonal(2).with_bound_checks(true)).unwrap();
        assert!(rep.converged);
        assert!(rep.trace.bound_violations.is_empty());
        for s in &rep.trace.sweeps {
            assert_eq!(s.er_values.len(), 3);
            assert!(s.er_values.iter().all(|&e| e <= 0.0));
        }
        assert!(rep.final_error.unwrap() < 1e-12);
    }
}
