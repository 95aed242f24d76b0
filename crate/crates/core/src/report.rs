//! Solver run reports shared by the projection solvers and the baselines.

use serde::{Deserialize, Serialize};

/// One record per outer iteration (a full sweep for the projection and
/// Gauss-Seidel solvers, a single update for the Krylov baselines).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRecord {
    pub iteration: usize,
    /// Residual 2-norm at the end of the iteration (incrementally updated).
    pub residual_norm: f64,
    /// `||x_after - x_before||` across the whole iteration.
    pub step_norm: f64,
    /// Correction norm of the last inner projection step of the sweep.
    pub last_step_norm: f64,
    /// Error reductions of every inner step (orthogonal path only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub er_values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundViolation {
    /// Global inner-step counter, starting at 1.
    pub step: usize,
    pub description: String,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct IterationTrace {
    pub sweeps: Vec<SweepRecord>,
    #[serde(default)]
    pub bound_violations: Vec<BoundViolation>,
}

impl IterationTrace {
    pub fn residual_norms(&self) -> impl Iterator<Item = f64> + '_ {
        self.sweeps.iter().map(|s| s.residual_norm)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// The step-norm stopping rule fired.
    StepNorm,
    /// The iterate solves the system exactly (zero residual or a happy
    /// breakdown in the Krylov recurrences).
    Exact,
    MaxIterations,
    /// A recurrence divided by zero before reaching the solution.
    Breakdown,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReport {
    pub solver_label: String,
    pub iterations: usize,
    pub converged: bool,
    pub termination: Termination,
    /// `||b - A x||_2` recomputed from scratch at exit.
    pub final_residual: f64,
    /// `||x - x*||_2` when the exact solution is known.
    pub final_error: Option<f64>,
    /// The step norm the stopping rule last tested.
    pub final_step_norm: f64,
    pub trace: IterationTrace,
    pub elapsed_seconds: f64,
    #[serde(skip)]
    pub solution: Vec<f64>,
}
