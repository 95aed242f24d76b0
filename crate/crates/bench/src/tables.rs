//! Reruns the two reference experiments and compares against published values.

use std::fmt;

use mdopm::baselines::{BaselineConfig, BaselineMethod};
use mdopm::projection::SolverConfig;
use mdopm::SolveReport;

use crate::runner::{build_problem, run_on};
use crate::spec::{GeneratorSpec, ProblemSource, SolverSpec};
use crate::BenchError;

const STOP_TOL: f64 = 1e-12;
const MAX_ITER: usize = 10_000;
/// Allowed distance between measured and reference residuals, in decades.
pub const RESIDUAL_DECADES: f64 = 2.0;

struct Reference {
    process: &'static str,
    solver: SolverSpec,
    iterations: usize,
    residual: f64,
    tolerance: usize,
}

fn opm(m: usize) -> SolverSpec {
    SolverSpec::Projection(SolverConfig::oblique(m).with_stop_tol(STOP_TOL).with_max_outer(MAX_ITER))
}

fn baseline(method: BaselineMethod) -> SolverSpec {
    SolverSpec::Baseline(BaselineConfig::new(method).with_stop_tol(STOP_TOL).with_max_iter(MAX_ITER))
}

fn reference(process: &'static str, solver: SolverSpec, iterations: usize, residual: f64, tolerance: usize) -> Reference {
    Reference { process, solver, iterations, residual, tolerance }
}

fn table_one() -> (GeneratorSpec, Vec<Reference>) {
    (
        GeneratorSpec::Hankel { n: 100 },
        vec![
            reference("6D-OPM", opm(6), 14, 3.5755e-12, 1),
            reference("10D-OPM", opm(10), 8, 4.6142e-12, 1),
            reference("50D-OPM", opm(50), 2, 3.8e-15, 1),
            reference("GMRES", baseline(BaselineMethod::Gmres), 10, 3.7e-15, 2),
            reference("CGNR", baseline(BaselineMethod::Cgnr), 9, 5.3427e-15, 1),
            reference("Craig", baseline(BaselineMethod::Craig), 9, 4.9704e-15, 1),
        ],
    )
}

fn table_two() -> (GeneratorSpec, Vec<Reference>) {
    (
        GeneratorSpec::Prescribed { n: 400, seed: 1 },
        vec![
            reference("4D-OPM", opm(4), 1, 2.1618e-15, 0),
            reference("CGNR", baseline(BaselineMethod::Cgnr), 6, 5.3328e-15, 1),
            reference("Craig", baseline(BaselineMethod::Craig), 6, 5.4702e-15, 1),
        ],
    )
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableRow {
    pub table: usize,
    pub process: String,
    pub paper_iterations: usize,
    pub paper_residual: f64,
    pub iteration_tolerance: usize,
    pub report: SolveReport,
}

impl TableRow {
    pub fn measured_iterations(&self) -> usize {
        self.report.iterations
    }

    pub fn measured_residual(&self) -> f64 {
        self.report.final_residual
    }

    pub fn iterations_ok(&self) -> bool {
        self.measured_iterations().abs_diff(self.paper_iterations) <= self.iteration_tolerance
    }

    pub fn residual_ok(&self) -> bool {
        let measured = self.measured_residual();
        measured > 0.0 && (measured / self.paper_residual).log10().abs() <= RESIDUAL_DECADES
    }

    pub fn ok(&self) -> bool {
        self.report.converged && self.iterations_ok() && self.residual_ok()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TableReport {
    pub problems: [String; 2],
    pub rows: Vec<TableRow>,
}

impl TableReport {
    pub fn table(&self, table: usize) -> impl Iterator<Item = &TableRow> {
        self.rows.iter().filter(move |r| r.table == table)
    }

    pub fn row(&self, table: usize, process: &str) -> Option<&TableRow> {
        self.table(table).find(|r| r.process == process)
    }

    pub fn mismatches(&self) -> usize {
        self.rows.iter().filter(|r| !r.ok()).count()
    }
}

impl fmt::Display for TableReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (t, problem) in self.problems.iter().enumerate() {
            let table = t + 1;
            writeln!(f, "Table {table} ({problem})")?;
            writeln!(
                f,
                "{:<10} {:>11} {:>14} {:>14} {:>14}  status",
                "process", "paper iters", "measured iters", "paper resid", "measured resid"
            )?;
            for row in self.table(table) {
                let status = match (row.report.converged, row.iterations_ok(), row.residual_ok()) {
                    (false, _, _) => "MISMATCH (not converged)".to_string(),
                    (true, true, true) => "ok".to_string(),
                    (true, it, res) => {
                        let mut parts = Vec::new();
                        if !it {
                            parts.push(format!("iterations off by more than {}", row.iteration_tolerance));
                        }
                        if !res {
                            parts.push("residual off by more than two decades".to_string());
                        }
                        format!("MISMATCH ({})", parts.join(", "))
                    }
                };
                writeln!(
                    f,
                    "{:<10} {:>11} {:>14} {:>14.4e} {:>14.4e}  {}",
                    row.process,
                    row.paper_iterations,
                    row.measured_iterations(),
                    row.paper_residual,
                    row.measured_residual(),
                    status
                )?;
            }
            writeln!(f)?;
        }
        writeln!(f, "{} of {} rows outside tolerance", self.mismatches(), self.rows.len())
    }
}

/// Runs one table (1 or 2).
pub fn reproduce_table(table: usize) -> Result<(String, Vec<TableRow>), BenchError> {
    let (generator, refs) = match table {
        1 => table_one(),
        2 => table_two(),
        _ => panic!("no table {table}"),
    };
    let problem = build_problem(&ProblemSource::Generator(generator))?;
    let solvers: Vec<_> = refs.iter().map(|r| r.solver.clone()).collect();
    let reports = run_on(&problem, &solvers)?;
    let rows = refs
        .into_iter()
        .zip(reports)
        .map(|(r, report)| TableRow {
            table,
            process: r.process.to_string(),
            paper_iterations: r.iterations,
            paper_residual: r.residual,
            iteration_tolerance: r.tolerance,
            report,
        })
        .collect();
    Ok((problem.label().to_string(), rows))
}

/// Runs both tables. Mismatches are recorded in the report, never returned as errors.
pub fn reproduce_tables() -> Result<TableReport, BenchError> {
    let (first, mut rows) = reproduce_table(1)?;
    let (second, more) = reproduce_table(2)?;
    rows.extend(more);
    Ok(TableReport { problems: [first, second], rows })
}
