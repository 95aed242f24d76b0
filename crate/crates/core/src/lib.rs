//! m-dimensional orthogonal and oblique projection solvers for square
//! non-singular linear systems `A x = b`, with the classical baselines
//! they are compared against and the problem generators used to do so.
//!
//! ```
//! use mdopm::problems::gen_hankel;
//! use mdopm::projection::{solve, SolverConfig};
//!
//! let problem = gen_hankel(40).unwrap();
//! let report = solve(&problem, &SolverConfig::oblique(8)).unwrap();
//! assert!(report.converged);
//! assert!(report.final_residual < 1e-10);
//! ```

pub mod baselines;
pub mod error;
pub mod linalg;
pub mod problems;
pub mod projection;
pub mod report;

pub use error::SolveError;
pub use problems::ProblemInstance;
pub use report::{SolveReport, Termination};
