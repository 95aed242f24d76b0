//! The Hankel and prescribed-spectrum experiments at the scale they were
//! reported.

use mdopm::baselines::{solve_baseline, BaselineConfig, BaselineMethod};
use mdopm::linalg::{norm2, singular_extremes};
use mdopm::problems::{gen_hankel, gen_prescribed_singular};
use mdopm::projection::{contraction_bound, solve, SolverConfig};

#[test]
fn hankel_oblique_sweep_counts() {
    let p = gen_hankel(100).unwrap();
    let expected = [(6, 14, 3.5755e-12), (10, 8, 4.6142e-12), (50, 2, 3.8e-15)];
    for (m, sweeps, residual) in expected {
        let rep = solve(&p, &SolverConfig::oblique(m)).unwrap();
        assert!(rep.converged);
        assert!(rep.iterations.abs_diff(sweeps) <= 1, "m = {m}: {} sweeps", rep.iterations);
        let ratio = rep.final_residual / residual;
        assert!((1e-2..=1e2).contains(&ratio), "m = {m}: residual {:e}", rep.final_residual);
    }
}

#[test]
fn hankel_baselines() {
    let p = gen_hankel(100).unwrap();
    for (method, iters, slack) in [
        (BaselineMethod::Cgnr, 9, 1),
        (BaselineMethod::Craig, 9, 1),
        (BaselineMethod::Gmres, 10, 2),
    ] {
        let rep = solve_baseline(&p, &BaselineConfig::new(method)).unwrap();
        assert!(rep.converged);
        assert!(rep.iterations.abs_diff(iters) <= slack, "{method:?}: {}", rep.iterations);
        assert!(rep.final_residual < 1e-13);
    }
}

#[test]
fn prescribed_spectrum_contraction_factor() {
    let p = gen_prescribed_singular(400, 1).unwrap();
    let s = singular_extremes(p.a()).unwrap();
    assert!((s.sigma_max - 1.1).abs() < 1e-10);
    assert!((s.sigma_min - 1.0).abs() < 1e-10);
    let c = contraction_bound(p.a()).unwrap();
    assert!((c - (1.0 - 1.0 / 1.21)).abs() < 1e-9, "{c}");
}

#[test]
fn prescribed_spectrum_solvers_converge() {
    let p = gen_prescribed_singular(400, 1).unwrap();
    let rep = solve(&p, &SolverConfig::oblique(4)).unwrap();
    assert!(rep.converged);
    assert!(rep.final_residual <= 1e-12);
    for method in [BaselineMethod::Cgnr, BaselineMethod::Craig] {
        let rep = solve_baseline(&p, &BaselineConfig::new(method)).unwrap();
        assert!(rep.iterations.abs_diff(6) <= 1, "{method:?}: {}", rep.iterations);
        assert!(rep.final_residual <= 1e-10 * norm2(p.b()));
    }
}
