//! Run specification files.
//!
//! A flat `key = value` format, one entry per line, `#` starting a comment:
//!
//! ```text
//! problem = hankel        # hankel | prescribed | spd | gaussian | identity
//! n = 100
//! seed = 1                # prescribed, spd, gaussian
//! cond = 1000             # spd
//! # or, instead of `problem`:
//! # matrix = a.mtx
//! # rhs = b.mtx           # optional, defaults to b = A * ones
//! stop_tol = 1e-12
//! max_iter = 10000
//! solver = opm-oblique m=10 strategy=greedy
//! solver = opm-orthogonal m=2 strategy=cyclic stop=sweep bounds=true
//! solver = cgnr
//! solver = craig
//! solver = gmres restart=30
//! solver = gauss-seidel
//! ```
//!
//! Relative file paths are resolved against the directory of the spec file.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use mdopm::baselines::{BaselineConfig, BaselineMethod};
use mdopm::projection::{IndexStrategy, Method, SolverConfig, StopRule};

use crate::BenchError;

#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    Hankel { n: usize },
    Prescribed { n: usize, seed: u64 },
    Spd { n: usize, cond: f64, seed: u64 },
    Gaussian { n: usize, seed: u64 },
    Identity { n: usize },
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProblemSource {
    Generator(GeneratorSpec),
    Files { matrix: PathBuf, rhs: Option<PathBuf> },
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolverSpec {
    Projection(SolverConfig),
    Baseline(BaselineConfig),
}

impl SolverSpec {
    pub fn label(&self) -> String {
        match self {
            SolverSpec::Projection(c) => c.label(),
            SolverSpec::Baseline(c) => c.label(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(format!("unknown output format `{other}` (expected csv or json)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub problem: ProblemSource,
    pub solvers: Vec<SolverSpec>,
    pub stop_tol: f64,
    pub max_iter: usize,
    pub output: Option<(PathBuf, OutputFormat)>,
}

fn spec_err(line: usize, message: impl Into<String>) -> BenchError {
    BenchError::Spec { line, message: message.into() }
}

fn parse_num<T: std::str::FromStr>(value: &str, line: usize, key: &str) -> Result<T, BenchError> {
    value.parse().map_err(|_| spec_err(line, format!("invalid value `{value}` for `{key}`")))
}

fn parse_bool(value: &str, line: usize, key: &str) -> Result<bool, BenchError> {
    match value {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(spec_err(line, format!("invalid boolean `{value}` for `{key}`"))),
    }
}

/// Parses one `solver =` value; global tolerances are applied later.
fn parse_solver(value: &str, line: usize) -> Result<SolverSpec, BenchError> {
    let mut tokens = value.split_whitespace();
    let name = tokens.next().ok_or_else(|| spec_err(line, "empty solver entry"))?;
    let mut options = Vec::new();
    for tok in tokens {
        let (k, v) = tok
            .split_once('=')
            .ok_or_else(|| spec_err(line, format!("solver option `{tok}` is not `key=value`")))?;
        options.push((k, v));
    }

    let spec = match name {
        "opm-oblique" | "opm-orthogonal" => {
            let method = if name == "opm-oblique" { Method::Oblique } else { Method::Orthogonal };
            let mut config = SolverConfig::new(0, method);
            for (k, v) in options {
                match k {
                    "m" => config.m = parse_num(v, line, k)?,
                    "strategy" => {
                        config.index_strategy = match v {
                            "greedy" => IndexStrategy::Greedy,
                            "cyclic" => IndexStrategy::Cyclic,
                            _ => return Err(spec_err(line, format!("unknown strategy `{v}`"))),
                        }
                    }
                    "stop" => {
                        config.stop_rule = match v {
                            "inner" => StopRule::LastInnerStep,
                            "sweep" => StopRule::SweepDifference,
                            _ => return Err(spec_err(line, format!("unknown stop rule `{v}`"))),
                        }
                    }
                    "bounds" => config.check_bounds = parse_bool(v, line, k)?,
                    _ => return Err(spec_err(line, format!("unknown option `{k}` for {name}"))),
                }
            }
            if config.m == 0 {
                return Err(spec_err(line, format!("{name} needs a positive `m=`")));
            }
            SolverSpec::Projection(config)
        }
        "cgnr" | "craig" | "gmres" | "gauss-seidel" => {
            let method = match name {
                "cgnr" => BaselineMethod::Cgnr,
                "craig" => BaselineMethod::Craig,
                "gmres" => BaselineMethod::Gmres,
                _ => BaselineMethod::GaussSeidel,
            };
            let mut config = BaselineConfig::new(method);
            for (k, v) in options {
                match (k, method) {
                    ("restart", BaselineMethod::Gmres) => config.gmres_restart = Some(parse_num(v, line, k)?),
                    _ => return Err(spec_err(line, format!("unknown option `{k}` for {name}"))),
                }
            }
            SolverSpec::Baseline(config)
        }
        other => return Err(spec_err(line, format!("unknown solver `{other}`"))),
    };
    Ok(spec)
}

impl RunSpec {
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, BenchError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| BenchError::Io { path: path.to_path_buf(), source })?;
        let base = path.parent().unwrap_or_else(|| Path::new("."));
        Self::parse(&text, base)
    }

    /// Parses spec text, resolving relative paths against `base_dir`.
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self, BenchError> {
        let mut seen = HashSet::new();
        let mut problem: Option<String> = None;
        let mut n: Option<usize> = None;
        let mut seed: u64 = 1;
        let mut cond: f64 = 1e3;
        let mut matrix: Option<PathBuf> = None;
        let mut rhs: Option<PathBuf> = None;
        let mut stop_tol: f64 = 1e-12;
        let mut max_iter = 10_000;
        let mut output: Option<PathBuf> = None;
        let mut format: Option<OutputFormat> = None;
        let mut solvers = Vec::new();
        let resolve = |v: &str| {
            let p = PathBuf::from(v);
            if p.is_relative() { base_dir.join(p) } else { p }
        };

        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| spec_err(line, format!("expected `key = value`, found `{content}`")))?;
            if key != "solver" && !seen.insert(key.to_string()) {
                return Err(spec_err(line, format!("duplicate key `{key}`")));
            }
            match key {
                "problem" => problem = Some(value.to_string()),
                "n" => n = Some(parse_num(value, line, key)?),
                "seed" => seed = parse_num(value, line, key)?,
                "cond" => cond = parse_num(value, line, key)?,
                "matrix" => matrix = Some(resolve(value)),
                "rhs" => rhs = Some(resolve(value)),
                "stop_tol" => stop_tol = parse_num(value, line, key)?,
                "max_iter" => max_iter = parse_num(value, line, key)?,
                "output" => output = Some(resolve(value)),
                "format" => format = Some(value.parse().map_err(|e: String| spec_err(line, e))?),
                "solver" => solvers.push(parse_solver(value, line)?),
                _ => return Err(spec_err(line, format!("unknown key `{key}`"))),
            }
        }

        if !(stop_tol.is_finite() && stop_tol > 0.0) {
            return Err(spec_err(0, format!("stop_tol must be positive, got {stop_tol}")));
        }
        if max_iter == 0 {
            return Err(spec_err(0, "max_iter must be positive"));
        }

        let problem = match (problem, matrix) {
            (Some(_), Some(_)) => return Err(spec_err(0, "give either `problem` or `matrix`, not both")),
            (None, None) => return Err(spec_err(0, "missing `problem` or `matrix`")),
            (None, Some(matrix)) => ProblemSource::Files { matrix, rhs },
            (Some(name), None) => {
                if rhs.is_some() {
                    return Err(spec_err(0, "`rhs` requires `matrix`"));
                }
                let n = n.ok_or_else(|| spec_err(0, format!("problem `{name}` needs `n`")))?;
                if n == 0 {
                    return Err(spec_err(0, "`n` must be positive"));
                }
                ProblemSource::Generator(match name.as_str() {
                    "hankel" => GeneratorSpec::Hankel { n },
                    "prescribed" => GeneratorSpec::Prescribed { n, seed },
                    "spd" => GeneratorSpec::Spd { n, cond, seed },
                    "gaussian" => GeneratorSpec::Gaussian { n, seed },
                    "identity" => GeneratorSpec::Identity { n },
                    other => return Err(spec_err(0, format!("unknown problem generator `{other}`"))),
                })
            }
        };

        if solvers.is_empty() {
            return Err(spec_err(0, "at least one `solver` entry is required"));
        }
        let solvers = solvers
            .into_iter()
            .map(|spec| match spec {
                SolverSpec::Projection(c) => {
                    SolverSpec::Projection(c.with_stop_tol(stop_tol).with_max_outer(max_iter))
                }
                SolverSpec::Baseline(c) => SolverSpec::Baseline(c.with_stop_tol(stop_tol).with_max_iter(max_iter)),
            })
            .collect();

        let output = match (output, format) {
            (Some(p), Some(f)) => Some((p, f)),
            (Some(p), None) => Some((p, OutputFormat::Json)),
            (None, Some(_)) => return Err(spec_err(0, "`format` requires `output`")),
            (None, None) => None,
        };

        Ok(Self { problem, solvers, stop_tol, max_iter, output })
    }
}
