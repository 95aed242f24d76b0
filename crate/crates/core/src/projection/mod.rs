//! m-dimensional projection methods.
//!
//! Each inner step picks `m` coordinate directions `E_m = [e_i1 .. e_im]`
//! and imposes a Petrov-Galerkin condition on the new residual:
//!
//! * orthogonal (`L = K`, SPD `A`): `E_m^T r_new = 0`, which minimizes the
//!   A-norm of the error over `x + span(E_m)`;
//! * oblique (`L = A K`, any non-singular `A`): `(A E_m)^T r_new = 0`, which
//!   minimizes `||r_new||_2` over the same affine space.
//!
//! [`solve`] sweeps `n` such steps per outer iteration.

mod bounds;
mod select;
mod solver;
mod step;

use serde::{Deserialize, Serialize};

use crate::error::SolveError;

pub use bounds::{check_contraction, check_step_bound, contraction_bound, BOUND_SLACK};
pub use select::{greedy_indices, select_indices};
pub use solver::solve;
pub use step::{oblique_step, orthogonal_step, StepOutcome, STAGNATION_RTOL};

/// Strictly increasing, 0-based column indices selecting the basis `E_m`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct IndexSet {
    indices: Vec<usize>,
}

impl IndexSet {
    /// Sorts `indices` and validates them against the system size `n`.
    pub fn new(mut indices: Vec<usize>, n: usize) -> Result<Self, SolveError> {
        indices.sort_unstable();
        if indices.is_empty() || indices.windows(2).any(|w| w[0] == w[1]) {
            return Err(SolveError::InvalidIndexSet);
        }
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(SolveError::IndexOutOfRange { index: bad, n });
        }
        Ok(Self { indices })
    }

    /// All of `0..n`.
    pub fn full(n: usize) -> Self {
        Self { indices: (0..n).collect() }
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.indices
    }

    pub fn m(&self) -> usize {
        self.indices.len()
    }

    /// 1-based indices, as conventionally written for `E_m`.
    pub fn one_based(&self) -> Vec<usize> {
        self.indices.iter().map(|i| i + 1).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Galerkin projection, `L = K`; requires SPD `A`.
    Orthogonal,
    /// Petrov-Galerkin projection with `L = A K`.
    Oblique,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IndexStrategy {
    /// Window of `m` consecutive indices starting at the inner-step counter.
    Cyclic,
    /// The `m` coordinates with the largest objective gradient.
    Greedy,
}

/// When a sweep counts as converged.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StopRule {
    /// The last inner projection step of the sweep moved `x` by less than
    /// `stop_tol`.
    LastInnerStep,
    /// The whole sweep moved `x` by less than `stop_tol`.
    SweepDifference,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub m: usize,
    pub method: Method,
    pub index_strategy: IndexStrategy,
    pub stop_tol: f64,
    pub max_outer: usize,
    pub check_bounds: bool,
    pub stop_rule: StopRule,
}

impl SolverConfig {
    pub fn new(m: usize, method: Method) -> Self {
        Self {
            m,
            method,
            index_strategy: IndexStrategy::Greedy,
            stop_tol: 1e-12,
            max_outer: 10_000,
            check_bounds: false,
            stop_rule: StopRule::LastInnerStep,
        }
    }

    pub fn oblique(m: usize) -> Self {
        Self::new(m, Method::Oblique)
    }

    pub fn orthogonal(m: usize) -> Self {
        Self::new(m, Method::Orthogonal)
    }

    pub fn with_strategy(mut self, strategy: IndexStrategy) -> Self {
        self.index_strategy = strategy;
        self
    }

    pub fn with_stop_tol(mut self, tol: f64) -> Self {
        self.stop_tol = tol;
        self
    }

    pub fn with_max_outer(mut self, max_outer: usize) -> Self {
        self.max_outer = max_outer;
        self
    }

    pub fn with_bound_checks(mut self, on: bool) -> Self {
        self.check_bounds = on;
        self
    }

    pub fn with_stop_rule(mut self, rule: StopRule) -> Self {
        self.stop_rule = rule;
        self
    }

    pub fn label(&self) -> String {
        let method = match self.method {
            Method::Orthogonal => "orthogonal",
            Method::Oblique => "oblique",
        };
        let strategy = match self.index_strategy {
            IndexStrategy::Cyclic => "cyclic",
            IndexStrategy::Greedy => "greedy",
        };
        format!("{}D-OPM {method} {strategy}", self.m)
    }
}
