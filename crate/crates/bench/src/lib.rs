//! Benchmark driver for the `mdopm` solvers: spec-file runs, CSV/JSON output
//! and reproduction of the reference iteration tables.

use std::path::PathBuf;

use thiserror::Error;

pub mod output;
pub mod runner;
pub mod spec;
pub mod tables;

pub use output::{read_csv_rows, write_csv, write_json, CsvRow};
pub use runner::{build_problem, run, run_on, run_solver};
pub use spec::{GeneratorSpec, OutputFormat, ProblemSource, RunSpec, SolverSpec};
pub use tables::{reproduce_table, reproduce_tables, TableReport, TableRow};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("spec line {line}: {message}")]
    Spec { line: usize, message: String },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Problem(#[from] mdopm::problems::ProblemError),
    #[error(transparent)]
    MatrixMarket(#[from] mdopm::problems::MatrixMarketError),
    #[error("{solver}: {source}")]
    Solve { solver: String, source: mdopm::SolveError },
    #[error(transparent)]
    Linalg(#[from] mdopm::linalg::LinalgError),
    #[error("rhs file must hold a single column or row, found {rows}x{cols}")]
    RhsShape { rows: usize, cols: usize },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
