use std::thread;

use mdopm::baselines::solve_baseline;
use mdopm::linalg::Matrix;
use mdopm::problems::{
    gen_hankel, gen_prescribed_singular, gen_random_nonsingular, gen_random_spd, read_matrix_market, ProblemInstance,
};
use mdopm::{projection, SolveReport};

use crate::spec::{GeneratorSpec, ProblemSource, RunSpec, SolverSpec};
use crate::BenchError;

/// Smallest singular value ratio accepted for `gaussian` problems.
const GAUSSIAN_MIN_RATIO: f64 = 1e-6;

pub fn build_problem(source: &ProblemSource) -> Result<ProblemInstance, BenchError> {
    let problem = match source {
        ProblemSource::Generator(g) => match *g {
            GeneratorSpec::Hankel { n } => gen_hankel(n)?,
            GeneratorSpec::Prescribed { n, seed } => gen_prescribed_singular(n, seed)?,
            GeneratorSpec::Spd { n, cond, seed } => gen_random_spd(n, cond, seed)?,
            GeneratorSpec::Gaussian { n, seed } => gen_random_nonsingular(n, seed, GAUSSIAN_MIN_RATIO)?,
            GeneratorSpec::Identity { n } => ProblemInstance::with_ones_solution(Matrix::identity(n), format!("identity-{n}"))?,
        },
        ProblemSource::Files { matrix, rhs } => {
            let a = read_matrix_market(matrix)?;
            let label = matrix.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
            match rhs {
                None => ProblemInstance::with_ones_solution(a, label)?,
                Some(path) => {
                    let b = read_matrix_market(path)?;
                    if b.rows() != 1 && b.cols() != 1 {
                        return Err(BenchError::RhsShape { rows: b.rows(), cols: b.cols() });
                    }
                    ProblemInstance::new(a, b.into_vec(), None, label)?
                }
            }
        }
    };
    Ok(problem)
}

pub fn run_solver(problem: &ProblemInstance, solver: &SolverSpec) -> Result<SolveReport, BenchError> {
    let result = match solver {
        SolverSpec::Projection(c) => projection::solve(problem, c),
        SolverSpec::Baseline(c) => solve_baseline(problem, c),
    };
    result.map_err(|source| BenchError::Solve { solver: solver.label(), source })
}

/// Builds the problem and runs every solver on it, one thread per solver.
/// Reports come back in spec order.
pub fn run(spec: &RunSpec) -> Result<Vec<SolveReport>, BenchError> {
    let problem = build_problem(&spec.problem)?;
    run_on(&problem, &spec.solvers)
}

pub fn run_on(problem: &ProblemInstance, solvers: &[SolverSpec]) -> Result<Vec<SolveReport>, BenchError> {
    thread::scope(|s| {
        let handles: Vec<_> = solvers.iter().map(|solver| s.spawn(|| run_solver(problem, solver))).collect();
        handles.into_iter().map(|h| h.join().expect("solver thread panicked")).collect()
    })
}
