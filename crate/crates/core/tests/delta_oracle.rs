use polylt::constants::ground_state_constant_1d;
use polylt::delta_solver::{
    appendix_secular_kappa, appendix_secular_solution, bs_eigenvalues, counterexample_report, eigenfunction,
    negative_spectrum_delta, DeltaPotential,
};
use polylt::Error;
use proptest::prelude::*;

#[test]
fn wronskian_route_matches_birman_schwinger() {
    for l in 1..=5u32 {
        for &c in &[0.5, 1.0, 2.0] {
            let a = appendix_secular_kappa(l, c).unwrap();
            let s = negative_spectrum_delta(l, &DeltaPotential::single(c).unwrap()).unwrap();
            assert_eq!(s.len(), 1);
            assert!((a - s.kappas[0]).abs() <= 1e-10 * a.max(1.0), "l={l} c={c}: {a} vs {}", s.kappas[0]);
        }
    }
}

#[test]
fn jump_condition_holds_at_secular_root() {
    for l in 1..=5u32 {
        let s = appendix_secular_solution(l, 0.8).unwrap();
        assert!(s.jump_residual < 1e-10, "l={l}: {s:?}");
        assert!(s.decay_residual < 1e-10, "l={l}: {s:?}");
    }
}

/// The derivative jump `u'''(0+) - u'''(0-) = u(0)` read off the
/// Birman-Schwinger eigenfunction by finite differences away from the site.
#[test]
fn biharmonic_eigenfunction_has_third_derivative_jump() {
    let pot = DeltaPotential::single(1.0).unwrap();
    let u = eigenfunction(2, &pot, 0.25).unwrap();
    let h = 1e-2;
    let third = |x: f64| {
        (u.eval(x + 2.0 * h) - 2.0 * u.eval(x + h) + 2.0 * u.eval(x - h) - u.eval(x - 2.0 * h)) / (2.0 * h.powi(3))
    };
    // u is even, so the jump is twice the one-sided limit, extrapolated
    // linearly from two points on the smooth side
    let (a, b) = (third(0.2), third(0.4));
    let jump = 2.0 * (2.0 * a - b);
    assert!((jump - u.eval(0.0)).abs() < 2e-3 * u.eval(0.0).abs(), "{jump} vs {}", u.eval(0.0));
}

#[test]
fn counterexample_reproduces_single_site_value() {
    for l in [2u32, 3] {
        let r = counterexample_report(l, 2.0).unwrap();
        assert!(r.kappa1_deviation < 1e-10, "{r:?}");
        assert!(r.strict);
        assert!(r.kappa0 > r.kappa1);
    }
}

#[test]
fn degenerate_coupling_is_reported() {
    // scan for a coupling where the shifted ground state vanishes at the origin
    let x0 = polylt::delta_solver::find_eigenfunction_zero(2).unwrap();
    let mut found = None;
    let grid: Vec<f64> = (1..4000).map(|i| 1.0 + 0.01 * i as f64).collect();
    for w in grid.windows(2) {
        let f = |a: f64| {
            let k = polylt::delta_solver::single_delta_kappa(2, a);
            polylt::greens::green_kernel(2, k, x0).unwrap()
        };
        if f(w[0]).signum() != f(w[1]).signum() {
            let (lo, hi, _) = polylt::roots::bisect(f, w[0], w[1], 1e-13, 200).unwrap();
            found = Some(0.5 * (lo + hi));
            break;
        }
    }
    let alpha = found.expect("degenerate coupling in (1, 41)");
    assert!(matches!(counterexample_report(2, alpha), Err(Error::DegenerateCoupling { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn single_site_ratio_is_coupling_independent(l in 1u32..6, c in 0.05f64..20.0) {
        let s = negative_spectrum_delta(l, &DeltaPotential::single(c).unwrap()).unwrap();
        let nu = 1.0 - 1.0 / (2.0 * l as f64);
        let ratio = s.kappas[0].powf(nu) / c;
        prop_assert!((ratio - ground_state_constant_1d(l as f64)).abs() < 1e-10);
    }

    #[test]
    fn spectra_are_translation_and_reflection_invariant(
        l in 1u32..4,
        gap_steps in 2u32..32,
        c1 in 0.2f64..3.0,
        c2 in 0.2f64..3.0,
        shift_steps in -40i32..40,
    ) {
        // dyadic positions keep every pairwise distance exact; weakly bound
        // states are too sensitive to rounding in the spacing otherwise
        let gap = gap_steps as f64 * 0.125;
        let shift = shift_steps as f64 * 0.25;
        let a = DeltaPotential::new([(0.0, c1), (gap, c2)]).unwrap();
        let b = DeltaPotential::new([(shift, c1), (shift + gap, c2)]).unwrap();
        let r = DeltaPotential::new([(-gap, c2), (0.0, c1)]).unwrap();
        let sa = negative_spectrum_delta(l, &a).unwrap();
        let sb = negative_spectrum_delta(l, &b).unwrap();
        let sr = negative_spectrum_delta(l, &r).unwrap();
        prop_assert_eq!(sa.len(), sb.len());
        prop_assert_eq!(sa.len(), sr.len());
        for ((x, y), z) in sa.kappas.iter().zip(&sb.kappas).zip(&sr.kappas) {
            prop_assert!((x - y).abs() < 1e-10 * x);
            prop_assert!((x - z).abs() < 1e-10 * x);
        }
    }

    #[test]
    fn located_eigenvalues_have_unit_bs_eigenvalue(l in 1u32..4, c in 0.3f64..3.0, gap in 0.5f64..3.0) {
        let pot = DeltaPotential::new([(0.0, c), (gap, 1.0)]).unwrap();
        let s = negative_spectrum_delta(l, &pot).unwrap();
        for k in &s.kappas {
            let mu = bs_eigenvalues(l, *k, &pot).unwrap();
            prop_assert!(mu.iter().any(|m| (m - 1.0).abs() < 1e-10));
        }
    }

    #[test]
    fn riesz_mean_below_ground_state_sum(l in 2u32..4, c1 in 0.2f64..3.0, c2 in 0.2f64..3.0, gap in 0.1f64..6.0) {
        // Σ κ_j^ν never exceeds c_l Σ c_j (critical bound with c_l ≥ L⁰)
        let pot = DeltaPotential::new([(0.0, c1), (gap, c2)]).unwrap();
        let s = negative_spectrum_delta(l, &pot).unwrap();
        let nu = 1.0 - 1.0 / (2.0 * l as f64);
        let sum: f64 = s.kappas.iter().map(|k| k.powf(nu)).sum();
        let c_l = polylt::constants::polyharmonic_constants(l).unwrap().c_l;
        prop_assert!(sum <= c_l * (c1 + c2));
    }
}
