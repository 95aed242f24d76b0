use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mdopm::linalg::Matrix;
use mdopm::problems::{write_matrix_market, MmFormat};
use mdopm_bench::{build_problem, reproduce_tables, run, write_csv, write_json};
use mdopm_bench::{BenchError, GeneratorSpec, OutputFormat, ProblemSource, RunSpec};

#[derive(Parser)]
#[command(name = "mdopm", version, about = "Run and benchmark m-dimensional projection solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum GenProblem {
    Hankel,
    Prescribed,
    Spd,
}

#[derive(Subcommand)]
enum Command {
    /// Run every solver listed in a spec file.
    Run {
        #[arg(long)]
        spec: PathBuf,
        /// Output file; defaults to the spec's `output`, then stdout.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum)]
        format: Option<Format>,
    },
    /// Reproduce the reference iteration tables.
    Tables {
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write a generated problem as MatrixMarket files (matrix plus `<stem>_rhs.mtx`).
    Gen {
        #[arg(long, value_enum)]
        problem: GenProblem,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1e3)]
        cond: f64,
        #[arg(long)]
        out: PathBuf,
    },
}

enum Outcome {
    AllConverged,
    NotConverged,
}

fn io_err(path: &Path) -> impl FnOnce(io::Error) -> BenchError + '_ {
    move |source| BenchError::Io { path: path.to_path_buf(), source }
}

fn open_output(out: Option<&Path>) -> Result<Box<dyn Write>, BenchError> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(File::create(path).map_err(io_err(path))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn rhs_path(out: &Path) -> PathBuf {
    let stem = out.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    out.with_file_name(format!("{stem}_rhs.mtx"))
}

fn execute(command: Command) -> Result<Outcome, BenchError> {
    match command {
        Command::Run { spec, out, format } => {
            let spec = RunSpec::from_file(&spec)?;
            let reports = run(&spec)?;
            let out = out.or_else(|| spec.output.as_ref().map(|(p, _)| p.clone()));
            let format = match format {
                Some(Format::Csv) => OutputFormat::Csv,
                Some(Format::Json) => OutputFormat::Json,
                None => match (&spec.output, out.as_deref().and_then(Path::extension)) {
                    (Some((_, f)), _) => *f,
                    (None, Some(ext)) if ext == "json" => OutputFormat::Json,
                    _ => OutputFormat::Csv,
                },
            };
            let mut w = open_output(out.as_deref())?;
            match format {
                OutputFormat::Csv => write_csv(&mut w, &reports)?,
                OutputFormat::Json => write_json(&mut w, &reports)?,
            }
            w.flush().map_err(io_err(out.as_deref().unwrap_or(Path::new("<stdout>"))))?;
            Ok(if reports.iter().all(|r| r.converged) { Outcome::AllConverged } else { Outcome::NotConverged })
        }
        Command::Tables { out } => {
            let report = reproduce_tables()?;
            let text = report.to_string();
            match out {
                Some(path) => fs::write(&path, &text).map_err(io_err(&path))?,
                None => print!("{text}"),
            }
            let converged = report.rows.iter().all(|r| r.report.converged);
            Ok(if converged { Outcome::AllConverged } else { Outcome::NotConverged })
        }
        Command::Gen { problem, n, seed, cond, out } => {
            let generator = match problem {
                GenProblem::Hankel => GeneratorSpec::Hankel { n },
                GenProblem::Prescribed => GeneratorSpec::Prescribed { n, seed },
                GenProblem::Spd => GeneratorSpec::Spd { n, cond, seed },
            };
            let instance = build_problem(&ProblemSource::Generator(generator))?;
            write_matrix_market(&out, instance.a(), MmFormat::Array)?;
            let b = Matrix::column_vector(instance.b())?;
            write_matrix_market(rhs_path(&out), &b, MmFormat::Array)?;
            Ok(Outcome::AllConverged)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(Outcome::AllConverged) => ExitCode::SUCCESS,
        Ok(Outcome::NotConverged) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
