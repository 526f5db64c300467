use rif_core::factor::potapov_factorize;
use rif_core::homotopy::{connect_to_pinned, verify_path};
use rif_core::matrix::det_winding;
use rif_core::random;
use rif_core::scalar::circle_grid;
use rif_core::spectral::{det_min_root_modulus, fejer_riesz};
use rif_core::Tolerances;
use rand::Rng;

#[test]
fn potapov_round_trips() {
    let tol = Tolerances::default();
    let mut rng = random::seeded(2024);
    for case in 0..50 {
        let n = rng.gen_range(1..=4);
        let k = rng.gen_range(0..=5);
        let phi = random::inner_function::<f64>(n, k, &mut rng).unwrap();
        let fact = potapov_factorize(&phi, &tol).unwrap_or_else(|e| panic!("case {case} (n={n}, k={k}): {e}"));
        let residual = circle_grid::<f64>(256)
            .into_iter()
            .map(|z| (fact.reconstruct(z) - phi.eval(z).unwrap()).norm())
            .fold(0.0, f64::max);
        assert!(residual <= 1e-7, "case {case}: residual {residual:e}");
        assert_eq!(fact.factors.len() as i64, det_winding(&phi, 512, &tol).unwrap(), "case {case}");
        assert_eq!(fact.factors.len(), k, "case {case}");
    }
}

#[test]
fn spectral_factor_round_trips() {
    let tol = Tolerances::default();
    let mut rng = random::seeded(99);
    for case in 0..50 {
        let n = rng.gen_range(1..=4);
        let d = rng.gen_range(0..=6);
        let q = random::positive_trig::<f64>(n, d, 0.1, &mut rng);
        let sf = fejer_riesz(&q, &tol).unwrap_or_else(|e| panic!("case {case}: {e}"));
        let scale = q.blocks().iter().map(|b| b.norm()).fold(1.0, f64::max);
        assert!(sf.residual <= 1e-8 * scale, "case {case} n={n} d={d}: residual {:e} scale {scale}", sf.residual);
        assert!(det_min_root_modulus(&sf.factor).unwrap() >= 1.0 - 1e-7, "case {case}");
    }
}

#[test]
fn random_rifs_connect() {
    let tol = Tolerances::default();
    let mut rng = random::seeded(7);
    let shapes = [(2, 1), (3, 1), (3, 2), (4, 2)];
    for case in 0..20 {
        let (m, n) = shapes[case % 4];
        let k = rng.gen_range(1..=3);
        let w = random::rif::<f64>(m, n, k, &mut rng).unwrap();
        let start = std::time::Instant::now();
        let path = connect_to_pinned(&w, &tol).unwrap_or_else(|e| panic!("case {case}: {e}"));
        let r = verify_path(&path, 33, 256);
        eprintln!("case {case} ({m},{n},{k}) segs {} defect {:.2e} chain {:.2e} {:?}", r.segments, r.max_defect, r.max_chain_error().max(r.start_error).max(r.end_error), start.elapsed());
        assert!(r.max_defect <= 1e-6, "case {case}: {r:?}");
        assert!(r.max_chain_error() <= 1e-7 && r.start_error <= 1e-7 && r.end_error <= 1e-7, "case {case}: {r:?}");
    }
}
