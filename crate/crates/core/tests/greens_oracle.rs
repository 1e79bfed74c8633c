use polylt::greens::{green_kernel, green_kernel_quadrature, ResolventKernel};
use proptest::prelude::*;

#[test]
fn residue_sum_matches_quadrature_on_grid() {
    let mut worst = 0.0f64;
    for l in 1..=4u32 {
        for &kappa in &[0.3, 1.0, 9.0] {
            for i in 0..=20 {
                let x = -5.0 + 0.5 * i as f64;
                let r = green_kernel(l, kappa, x).unwrap();
                let q = green_kernel_quadrature(l as f64, kappa, x).unwrap();
                worst = worst.max((r - q).abs());
                assert!((r - q).abs() <= 1e-9, "l={l} kappa={kappa} x={x}: {r} vs {q}");
            }
        }
    }
    println!("worst residue/quadrature deviation {worst:e}");
}

#[test]
fn diagonal_strictly_decreasing_in_kappa() {
    for l in 1..=5u32 {
        let mut prev = f64::INFINITY;
        for k in 1..40 {
            let kappa = 0.05 * k as f64;
            let g = green_kernel(l, kappa, 0.0).unwrap();
            assert!(g > 0.0 && g < prev);
            prev = g;
        }
    }
}

proptest! {
    #[test]
    fn scaling_law(l in 1u32..=5, kappa in 0.05f64..20.0, x in -6.0f64..6.0) {
        // G_κ(x) = κ^{1/(2l) - 1} G_1(κ^{1/(2l)} x)
        let s = kappa.powf(1.0 / (2.0 * l as f64));
        let lhs = green_kernel(l, kappa, x).unwrap();
        let rhs = kappa.powf(1.0 / (2.0 * l as f64) - 1.0) * green_kernel(l, 1.0, s * x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * (1.0 + rhs.abs()));
    }

    #[test]
    fn kernel_is_even(l in 1u32..=6, kappa in 0.01f64..50.0, x in 0.0f64..30.0) {
        let k = ResolventKernel::new(l, kappa).unwrap();
        prop_assert_eq!(k.eval(x), k.eval(-x));
    }
}
