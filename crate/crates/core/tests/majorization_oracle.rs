use nalgebra::DMatrix;
use polylt::majorization::{
    build_l_kernels, build_l_tilde_kernel, ky_fan_norms, majorization_defect, majorizes, SampledWeight,
    TrapezoidRule,
};
use proptest::prelude::*;

fn symmetric_from(seed: &[f64], n: usize) -> DMatrix<f64> {
    let a = DMatrix::from_fn(n, n, |i, j| seed[(i * n + j) % seed.len()] * ((i + 2 * j + 1) as f64).sin());
    &a + a.transpose()
}

/// Rotation by `θ` in the `(p, q)` plane.
fn givens(n: usize, p: usize, q: usize, theta: f64) -> DMatrix<f64> {
    let mut u = DMatrix::identity(n, n);
    u[(p, p)] = theta.cos();
    u[(q, q)] = theta.cos();
    u[(p, q)] = -theta.sin();
    u[(q, p)] = theta.sin();
    u
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn ky_fan_matches_eigendecomposition(seed in prop::collection::vec(-2.0f64..2.0, 36)) {
        let m = symmetric_from(&seed, 6);
        // oracle: nalgebra's own symmetric eigensolver
        let mut abs: Vec<f64> = m.clone().symmetric_eigen().eigenvalues.iter().map(|x| x.abs()).collect();
        abs.sort_by(|a, b| b.total_cmp(a));
        let norms = ky_fan_norms(&m, 6).unwrap();
        let mut acc = 0.0;
        for (n, s) in abs.iter().enumerate() {
            acc += s;
            prop_assert!((norms[n] - acc).abs() < 1e-10 * acc.max(1.0));
        }
        // nondecreasing with nonincreasing increments
        for w in norms.windows(3) {
            prop_assert!(w[1] >= w[0] - 1e-12);
            prop_assert!(w[2] - w[1] <= w[1] - w[0] + 1e-10);
        }
    }

    #[test]
    fn nonsymmetric_ky_fan_matches_svd(seed in prop::collection::vec(-2.0f64..2.0, 20)) {
        let m = DMatrix::from_fn(4, 5, |i, j| seed[i * 5 + j]);
        let mut s: Vec<f64> = m.clone().svd(false, false).singular_values.iter().copied().collect();
        s.sort_by(|a, b| b.total_cmp(a));
        let norms = ky_fan_norms(&m, 4).unwrap();
        let mut acc = 0.0;
        for (n, x) in s.iter().enumerate() {
            acc += x;
            prop_assert!((norms[n] - acc).abs() < 1e-10 * acc.max(1.0));
        }
    }

    #[test]
    fn unitary_mixtures_are_majorized(
        seed in prop::collection::vec(-2.0f64..2.0, 25),
        thetas in prop::collection::vec(0.0f64..6.3, 3),
        weights in prop::collection::vec(0.01f64..1.0, 3),
    ) {
        let a = symmetric_from(&seed, 5);
        let total: f64 = weights.iter().sum();
        let mut mix = DMatrix::zeros(5, 5);
        for (k, (&t, &w)) in thetas.iter().zip(&weights).enumerate() {
            let u = givens(5, k, k + 1, t) * givens(5, 4 - k, (5 - k) % 5, 0.5 * t);
            mix += (u.transpose() * &a * &u) * (w / total);
        }
        prop_assert!(majorizes(&a, &mix).unwrap());
    }

    #[test]
    fn scaling_down_is_majorized(seed in prop::collection::vec(-2.0f64..2.0, 16), c in 0.0f64..1.0) {
        let a = symmetric_from(&seed, 4);
        prop_assert!(majorizes(&a, &(&a * c)).unwrap());
    }

    #[test]
    fn l_form_below_l_tilde_form(v in prop::collection::vec(-1.0f64..1.0, 41), eps in 0.1f64..3.0) {
        let w = SampledWeight::from_fn(TrapezoidRule::new(6.0, 41).unwrap(), |x| (-x * x / 2.0).exp()).unwrap();
        let (l, lt) = build_l_kernels(&w, eps, 1.0 / 3f64.sqrt()).unwrap();
        let x = nalgebra::DVector::from_vec(v);
        let ql = x.dot(&(&l.matrix * &x));
        let qt = x.dot(&(&lt.matrix * &x));
        prop_assert!(ql <= qt + 1e-12 * qt.abs().max(1.0));
        prop_assert!(ql >= -1e-12);
    }
}

#[test]
fn l_tilde_trace_independent_of_eps() {
    let w = SampledWeight::from_fn(TrapezoidRule::new(8.0, 161).unwrap(), |x| 1.0 / (1.0 + x * x)).unwrap();
    let b = 0.7;
    let expected = (b + (b * b + 1.0f64).sqrt()) / (4.0 * b.sqrt()) * w.l2_norm_squared();
    for eps in [0.0, 0.25, 1.0, 4.0] {
        let k = build_l_tilde_kernel(&w, eps, b).unwrap();
        assert!((k.trace() - expected).abs() < 1e-12);
    }
}

#[test]
fn smaller_eps_majorizes_larger() {
    let w = SampledWeight::from_fn(TrapezoidRule::new(8.0, 101).unwrap(), |x| (-(x - 1.0).powi(2)).exp() + 0.5 * (-(x + 2.0).powi(2)).exp()).unwrap();
    let b = 1.0 / 3f64.sqrt();
    let k1 = build_l_tilde_kernel(&w, 1.0, b).unwrap();
    let k2 = build_l_tilde_kernel(&w, 0.5, b).unwrap();
    assert!(majorization_defect(&k2.matrix, &k1.matrix).unwrap() <= 1e-10);
}
