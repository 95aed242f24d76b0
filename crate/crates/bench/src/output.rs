use std::io::{Read, Write};

use mdopm::SolveReport;
use serde::Deserialize;

use crate::BenchError;

pub const CSV_HEADER: [&str; 6] =
    ["solver_label", "iterations", "converged", "final_residual", "final_error", "elapsed_seconds"];

fn float(v: f64) -> String {
    format!("{v:.16e}")
}

/// One row per report. `final_error` is empty when the exact solution is unknown.
pub fn write_csv<W: Write>(w: W, reports: &[SolveReport]) -> Result<(), BenchError> {
    let mut wtr = csv::Writer::from_writer(w);
    wtr.write_record(CSV_HEADER)?;
    for r in reports {
        wtr.write_record([
            r.solver_label.clone(),
            r.iterations.to_string(),
            r.converged.to_string(),
            float(r.final_residual),
            r.final_error.map(float).unwrap_or_default(),
            float(r.elapsed_seconds),
        ])?;
    }
    wtr.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn write_json<W: Write>(mut w: W, reports: &[SolveReport]) -> Result<(), BenchError> {
    serde_json::to_writer_pretty(&mut w, reports)?;
    writeln!(w).map_err(serde_json::Error::io)?;
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct CsvRow {
    pub solver_label: String,
    pub iterations: usize,
    pub converged: bool,
    pub final_residual: f64,
    pub final_error: Option<f64>,
    pub elapsed_seconds: f64,
}

pub fn read_csv_rows<R: Read>(r: R) -> Result<Vec<CsvRow>, BenchError> {
    let mut rdr = csv::Reader::from_reader(r);
    Ok(rdr.deserialize().collect::<Result<_, _>>()?)
}
