use mdopm::linalg::{
    a_norm_sq, norm2, singular_extremes, solve_least_squares, solve_spd_small, sub, Matrix,
};
use mdopm::problems::{gen_random_nonsingular, gen_random_spd};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.random_range(-1.0..1.0))
}

fn random_vec(n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn matvec_is_linear(seed in any::<u64>(), rows in 1usize..20, cols in 1usize..20, alpha in -10.0f64..10.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_matrix(rows, cols, &mut rng);
        let x = random_vec(cols, &mut rng);
        let y = random_vec(cols, &mut rng);
        let combo: Vec<f64> = x.iter().zip(&y).map(|(xi, yi)| alpha * xi + yi).collect();
        let lhs = a.matvec(&combo).unwrap();
        let ax = a.matvec(&x).unwrap();
        let ay = a.matvec(&y).unwrap();
        let rhs: Vec<f64> = ax.iter().zip(&ay).map(|(u, v)| alpha * u + v).collect();
        let scale = norm2(&rhs).max(alpha.abs() * norm2(&ax) + norm2(&ay)).max(1.0);
        prop_assert!(norm2(&sub(&lhs, &rhs)) <= 1e-12 * scale);
    }

    #[test]
    fn least_squares_is_optimal(seed in any::<u64>(), n in 1usize..=20, m_raw in 1usize..=5) {
        let m = m_raw.min(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_matrix(n, m, &mut rng);
        let r = random_vec(n, &mut rng);
        let y = solve_least_squares(&w, &r).unwrap();
        let best = norm2(&sub(&w.matvec(&y).unwrap(), &r));
        for _ in 0..100 {
            let d = random_vec(m, &mut rng);
            let moved: Vec<f64> = y.iter().zip(&d).map(|(yi, di)| yi + 1e-3 * di).collect();
            let other = norm2(&sub(&w.matvec(&moved).unwrap(), &r));
            prop_assert!(other >= best - 1e-10);
        }
    }

    #[test]
    fn least_squares_matches_normal_equations(seed in any::<u64>(), n in 3usize..=20, m_raw in 1usize..=5) {
        let m = m_raw.min(n);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_matrix(n, m, &mut rng);
        let r = random_vec(n, &mut rng);
        let wt = w.transpose();
        let gram = wt.matmul(&w).unwrap();
        let cond = singular_extremes(&gram).unwrap().condition_number();
        prop_assume!(cond < 1e8);
        let y = solve_least_squares(&w, &r).unwrap();
        let oracle = solve_spd_small(&gram, &wt.matvec(&r).unwrap()).unwrap();
        prop_assert!(norm2(&sub(&y, &oracle)) <= 1e-12 * cond * norm2(&oracle).max(1.0));
    }

    #[test]
    fn spd_solve_residual_bound(seed in any::<u64>(), m in 1usize..=8) {
        let b = gen_random_spd(m, 100.0, seed).unwrap().a().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
        let q = random_vec(m, &mut rng);
        let z = solve_spd_small(&b, &q).unwrap();
        let res = norm2(&sub(&b.matvec(&z).unwrap(), &q));
        prop_assert!(res <= 1e-14 * (b.frobenius_norm() * norm2(&z) + norm2(&q)));
    }

    #[test]
    fn singular_extremes_of_diagonal(d in prop::collection::vec(-100.0f64..100.0, 1..30)) {
        prop_assume!(d.iter().all(|v| v.abs() > 1e-3));
        let s = singular_extremes(&Matrix::from_diagonal(&d)).unwrap();
        let max = d.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        let min = d.iter().fold(f64::INFINITY, |m, v| m.min(v.abs()));
        prop_assert!((s.sigma_max - max).abs() <= 1e-12 * max);
        prop_assert!((s.sigma_min - min).abs() <= 1e-12 * max);
    }

    #[test]
    fn a_norm_positive_on_spd(seed in any::<u64>(), n in 1usize..=20) {
        let a = gen_random_spd(n, 1e3, seed).unwrap().a().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(1));
        let v = random_vec(n, &mut rng);
        prop_assume!(norm2(&v) > 0.0);
        prop_assert!(a_norm_sq(&a, &v).unwrap() > 0.0);
    }
}

#[test]
fn singular_extremes_matches_normal_matrix_eigenvalues() {
    for seed in 0..10 {
        let a = gen_random_nonsingular(12, seed, 1e-6).unwrap().a().clone();
        let s = singular_extremes(&a).unwrap();
        let ev = mdopm::linalg::symmetric_eigenvalues(&a.transpose().matmul(&a).unwrap()).unwrap();
        assert!((s.sigma_max - ev[11].sqrt()).abs() <= 1e-10 * s.sigma_max);
        // The squared route loses relative accuracy at the small end.
        assert!((s.sigma_min - ev[0].sqrt()).abs() <= 1e-6 * s.sigma_max);
    }
}
