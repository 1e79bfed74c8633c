use polylt::constants::{
    classical_constant, ground_state_constant_1d, ground_state_forms, polyharmonic_constants,
    riesz_bound_constant, semiclassical_constant, LtParams, Theorem,
};
use polylt::special::{beta_fn, gamma_fn};
use proptest::prelude::*;

/// Composite Simpson rule with `n` (even) panels.
fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + i as f64 * h);
    }
    s * h / 3.0
}

#[test]
fn gamma_three_halves_by_quadrature() {
    // Γ(3/2) = ∫ t^{1/2} e^{-t} dt = 2 ∫ u² e^{-u²} du with t = u²
    let q = 2.0 * simpson(|u| u * u * (-u * u).exp(), 0.0, 12.0, 20_000);
    assert!((gamma_fn(1.5).unwrap() - q).abs() < 1e-10);
    assert!((q - 0.886_226_925_5).abs() < 1e-10);
}

#[test]
fn beta_quarter_by_quadrature() {
    // B(1/4, 7/4) = ∫ t^{-3/4}(1-t)^{3/4} dt; t = u⁴ removes the endpoint
    // singularity at 0, and the remaining factor is smooth enough near 1
    // after s = (1-t)^{1/4}.
    let left = simpson(|u: f64| 4.0 * (1.0 - u.powi(4)).powf(0.75), 0.0, 0.5f64.powf(0.25), 20_000);
    let right = simpson(
        |s: f64| {
            let t = 1.0 - s.powi(4);
            4.0 * s.powi(3) * t.powf(-0.75) * s.powi(3)
        },
        0.0,
        0.5f64.powf(0.25),
        20_000,
    );
    let b = beta_fn(0.25, 1.75).unwrap();
    assert!((b - (left + right)).abs() < 1e-10, "{b} vs {}", left + right);
}

#[test]
fn semiclassical_constant_matches_independent_2d_quadrature() {
    // (2π)^{-2} ∫∫ (1 - ξ⁴ - η⁴)_+ with the inner integral done by hand:
    // ∫_0^R (R⁴ - η⁴) dη = (4/5) R⁵ with R⁴ = 1 - ξ⁴
    let outer = simpson(|x: f64| 0.8 * (1.0 - x.powi(4)).max(0.0).powf(1.25), 0.0, 1.0, 200_000);
    let oracle = 4.0 * outer / (2.0 * std::f64::consts::PI).powi(2);
    let c = semiclassical_constant(&LtParams::new(2.0, 1.0, 2).unwrap()).unwrap();
    assert!(((c - oracle) / oracle).abs() < 1e-6, "{c} vs {oracle}");
}

#[test]
fn classical_constant_one_dimension_by_quadrature() {
    // in one dimension both equal (1/π) ∫_0^1 (1 - ξ^{2l})^γ dξ
    for (l, g) in [(1.0, 1.5), (2.0, 0.75), (3.0, 2.0)] {
        let p = LtParams::new(l, g, 1).unwrap();
        let two_l = 2.0 * l;
        let oracle = simpson(|x: f64| (1.0 - x.powf(two_l)).max(0.0).powf(g), 0.0, 1.0, 400_000)
            / std::f64::consts::PI;
        let c = semiclassical_constant(&p).unwrap();
        assert!(((c - oracle) / oracle).abs() < 1e-6);
        assert!(((classical_constant(&p).unwrap() - c) / c).abs() < 1e-12);
    }
}

#[test]
fn reference_values() {
    assert!((ground_state_constant_1d(1.0) - 0.5).abs() < 1e-12);
    assert!((ground_state_constant_1d(2.0) - 1.0 / 8f64.sqrt()).abs() < 1e-12);
    let c3 = polyharmonic_constants(3).unwrap();
    assert!((c3.zeta - 2.0).abs() < 1e-12);
    assert!((c3.c_l - 2.0 / 3.0).abs() < 1e-12);
    let c2 = polyharmonic_constants(2).unwrap();
    assert!((c2.zeta - (1.0 + 2f64.sqrt())).abs() < 1e-12);
    let p = LtParams::critical(2.0, 1).unwrap();
    assert!((classical_constant(&p).unwrap() - 0.265_165_0).abs() < 1e-7);
}

proptest! {
    #[test]
    fn zeta_solves_its_polynomial(l in 2u32..12) {
        let c = polyharmonic_constants(l).unwrap();
        let z = c.zeta;
        let residual = (l - 1) as f64 + l as f64 * z - z.powi(l as i32);
        prop_assert!(residual.abs() < 1e-9 * z.powi(l as i32));
        prop_assert!(z >= 1.0 && z <= (l + 1) as f64);
    }

    #[test]
    fn ground_state_forms_agree(l in 1.0f64..8.0) {
        let (a, b) = ground_state_forms(l, 1).unwrap();
        prop_assert!(((a - b) / b).abs() < 1e-10);
    }

    #[test]
    fn riesz_bound_decreases_with_gamma(g1 in 0.75f64..3.0, dg in 0.01f64..2.0) {
        let p1 = LtParams::new(2.0, g1, 1).unwrap();
        let p2 = LtParams::new(2.0, g1 + dg, 1).unwrap();
        let a = riesz_bound_constant(&p1, Theorem::BiharmonicRiesz).unwrap();
        let b = riesz_bound_constant(&p2, Theorem::BiharmonicRiesz).unwrap();
        // L^cl_{2,γ,1} = (1/π) ∫_0^1 (1 - ξ⁴)^γ dξ decreases in γ
        prop_assert!(b < a);
    }

    #[test]
    fn recursion_factorises(l in 1.0f64..4.0, g in 0.5f64..3.0) {
        let d2 = semiclassical_constant(&LtParams::new(l, g, 2).unwrap()).unwrap();
        let shifted = semiclassical_constant(&LtParams::new(l, g + 1.0 / (2.0 * l), 1).unwrap()).unwrap();
        let base = semiclassical_constant(&LtParams::new(l, g, 1).unwrap()).unwrap();
        prop_assert!(((d2 - shifted * base) / d2).abs() < 1e-12);
    }
}
