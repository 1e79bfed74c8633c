//! Ky-Fan norms, the majorization order and the kernel families
//! `𝓛_ε = W ε³(∂⁴ + ε⁴)⁻¹ W` and `𝓛̃_ε = W aε(-∂² + ε²b)⁻¹ W`.
//!
//! Kernels are discretised by the Nyström method on a composite trapezoid
//! rule, `K_ij = √w_i W(x_i) k(x_i - x_j) W(x_j) √w_j`. Since `e^{-ε|t|}` is a
//! Cauchy mixture of characters `e^{ipt}`, the discrete `𝓛̃_ε` is a convex
//! combination of unitary conjugates of `𝓛̃_{ε'}` for `ε > ε'`, so the lemma
//! checks hold for the matrices themselves up to rounding.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::constants::polyharmonic_constants;
use crate::error::{domain, validation, Result};
use crate::greens::ResolventKernel;
use crate::linalg::{singular_values, symmetric_eigenvalues};
use crate::quadrature::integrate_to_infinity;
use crate::roots::golden_max;

/// Absolute tolerance on Ky-Fan partial sums.
pub const MAJORIZATION_TOL: f64 = 1e-10;

/// Composite trapezoid rule on `[-L, L]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrapezoidRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl TrapezoidRule {
    pub fn new(half_width: f64, points: usize) -> Result<Self> {
        if !(half_width > 0.0) || points < 2 {
            return validation("trapezoid rule needs L > 0 and at least two nodes");
        }
        let h = 2.0 * half_width / (points - 1) as f64;
        let nodes = (0..points).map(|i| -half_width + i as f64 * h).collect();
        let weights = (0..points)
            .map(|i| if i == 0 || i == points - 1 { 0.5 * h } else { h })
            .collect();
        Ok(Self { nodes, weights })
    }
}

/// Nonnegative weight function sampled on a quadrature rule.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SampledWeight {
    pub rule: TrapezoidRule,
    pub values: Vec<f64>,
}

impl SampledWeight {
    pub fn from_fn<F: Fn(f64) -> f64>(rule: TrapezoidRule, f: F) -> Result<Self> {
        let values: Vec<f64> = rule.nodes.iter().map(|&x| f(x)).collect();
        if values.iter().any(|v| !(*v >= 0.0) || !v.is_finite()) {
            return validation("weight function must be finite and nonnegative");
        }
        Ok(Self { rule, values })
    }

    /// `∫ W²` by the same rule.
    pub fn l2_norm_squared(&self) -> f64 {
        self.values.iter().zip(&self.rule.weights).map(|(v, w)| w * v * v).sum()
    }
}

/// Symmetric Nyström matrix of `W k(x - y) W`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelOperator {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub matrix: DMatrix<f64>,
}

impl KernelOperator {
    pub fn from_kernel<K: Fn(f64) -> f64>(w: &SampledWeight, k: K) -> Self {
        let n = w.values.len();
        let scaled: Vec<f64> = w
            .values
            .iter()
            .zip(&w.rule.weights)
            .map(|(v, q)| v * q.sqrt())
            .collect();
        let x = &w.rule.nodes;
        let mut matrix = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = scaled[i] * k(x[i] - x[j]) * scaled[j];
                matrix[(i, j)] = v;
                matrix[(j, i)] = v;
            }
        }
        Self {
            nodes: x.clone(),
            weights: w.rule.weights.clone(),
            matrix,
        }
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }

    /// Descending eigenvalues.
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let mut v = symmetric_eigenvalues(&self.matrix)?;
        v.reverse();
        Ok(v)
    }
}

fn is_symmetric(m: &DMatrix<f64>) -> bool {
    m.is_square() && (0..m.nrows()).all(|i| (0..i).all(|j| m[(i, j)] == m[(j, i)]))
}

/// `‖M‖_n = Σ_{j ≤ n} s_j(M)` for `n = 1, ..., n_max`.
pub fn ky_fan_norms(m: &DMatrix<f64>, n_max: usize) -> Result<Vec<f64>> {
    let dim = m.nrows().min(m.ncols());
    if n_max > dim {
        return validation(format!("n_max = {n_max} exceeds dimension {dim}"));
    }
    let mut s = if is_symmetric(m) {
        symmetric_eigenvalues(m)?.into_iter().map(f64::abs).collect()
    } else {
        singular_values(m)
    };
    s.sort_by(|a: &f64, b| b.total_cmp(a));
    let mut acc = 0.0;
    Ok(s.into_iter()
        .take(n_max)
        .map(|x| {
            acc += x;
            acc
        })
        .collect())
}

/// `max_n (‖B‖_n - ‖A‖_n)`; nonpositive when `A` majorizes `B`.
pub fn majorization_defect(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<f64> {
    if a.shape() != b.shape() {
        return validation(format!("shapes differ: {:?} vs {:?}", a.shape(), b.shape()));
    }
    let n = a.nrows().min(a.ncols());
    let na = ky_fan_norms(a, n)?;
    let nb = ky_fan_norms(b, n)?;
    Ok(na
        .iter()
        .zip(&nb)
        .map(|(x, y)| y - x)
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Whether `A` majorizes `B`: `‖B‖_n ≤ ‖A‖_n + 1e-10` for every `n`.
pub fn majorizes(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<bool> {
    Ok(majorization_defect(a, b)? <= MAJORIZATION_TOL)
}

/// `a(b) = (b + √(b² + 1)) / 2`.
pub fn tilde_prefactor(b: f64) -> f64 {
    0.5 * (b + (b * b + 1.0).sqrt())
}

/// Discretised `𝓛_ε` with kernel `ε³ G_{ε⁴}(x - y)` for `∂⁴ + ε⁴`.
pub fn build_l_kernel(w: &SampledWeight, eps: f64) -> Result<KernelOperator> {
    if !(eps > 0.0) || !eps.is_finite() {
        return domain(format!("L_eps needs eps > 0, got {eps}"));
    }
    let g = ResolventKernel::new(2, eps.powi(4))?;
    let e3 = eps.powi(3);
    Ok(KernelOperator::from_kernel(w, |t| e3 * g.eval(t)))
}

/// Discretised `𝓛̃_ε` with kernel `(a/2√b) e^{-ε√b|x-y|}`; `ε = 0` gives the
/// rank-one limit.
pub fn build_l_tilde_kernel(w: &SampledWeight, eps: f64, b: f64) -> Result<KernelOperator> {
    if !(eps >= 0.0) || !eps.is_finite() {
        return domain(format!("eps must be >= 0, got {eps}"));
    }
    if !(b > 0.0) || !b.is_finite() {
        return domain(format!("b must be positive, got {b}"));
    }
    let amp = tilde_prefactor(b) / (2.0 * b.sqrt());
    let rate = eps * b.sqrt();
    Ok(KernelOperator::from_kernel(w, |t| amp * (-rate * t.abs()).exp()))
}

/// `(𝓛_ε, 𝓛̃_ε)`.
pub fn build_l_kernels(w: &SampledWeight, eps: f64, b: f64) -> Result<(KernelOperator, KernelOperator)> {
    Ok((build_l_kernel(w, eps)?, build_l_tilde_kernel(w, eps, b)?))
}

/// `g(ρ) = (ρ^{2l-2} + ρ^{2l}) / (1 + ρ^{2l})`.
pub fn symbol_ratio_profile(l: u32, rho: f64) -> f64 {
    let p = rho.powi(2 * l as i32);
    (rho.powi(2 * l as i32 - 2) + p) / (1.0 + p)
}

/// Maximiser and maximum of [`symbol_ratio_profile`] over `ρ > 0`.
pub fn scalar_bound_argsup(l: u32) -> Result<(f64, f64)> {
    if l < 2 {
        return domain(format!("symbol bound needs l >= 2, got {l}"));
    }
    // ρ² lies in [1, l + 1]; search in ln ρ where the profile is unimodal
    let hi = ((l + 2) as f64).sqrt().ln();
    let (t, v) = golden_max(|t| symbol_ratio_profile(l, t.exp()), -1.0, hi, 1e-12);
    Ok((t.exp(), v))
}

pub fn scalar_bound_sup(l: u32) -> Result<f64> {
    Ok(scalar_bound_argsup(l)?.1)
}

/// `c̃_l ε/(ξ² + ε²) - ε^{2l-1}/(ξ^{2l} + ε^{2l})`.
pub fn polyharmonic_symbol_gap(l: u32, c_tilde: f64, xi: f64, eps: f64) -> f64 {
    let two_l = 2 * l as i32;
    c_tilde * eps / (xi * xi + eps * eps) - eps.powi(two_l - 1) / (xi.powi(two_l) + eps.powi(two_l))
}

/// `a/(ξ² + ε²b) - ε²/(ξ⁴ + ε⁴)`.
pub fn biharmonic_symbol_gap(b: f64, xi: f64, eps: f64) -> f64 {
    tilde_prefactor(b) / (xi * xi + eps * eps * b) - eps * eps / (xi.powi(4) + eps.powi(4))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SymbolInequalityReport {
    pub l: u32,
    pub grid_points: usize,
    /// Largest `lhs / rhs` over the grid; at most one when the inequality holds.
    pub max_ratio: f64,
    pub violations: usize,
    /// Equality locus `ε²/ξ²` located by maximising along rays.
    pub locus: f64,
    /// Predicted locus: `ζ_l` for the polyharmonic inequality,
    /// `2a(b)` for the biharmonic one.
    pub predicted_locus: f64,
    pub locus_deviation: f64,
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| (lo.ln() + (hi / lo).ln() * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Checks `ε^{2l-1}/(ξ^{2l}+ε^{2l}) ≤ c̃_l ε/(ξ²+ε²)` on an `n × n`
/// logarithmic `(ξ, ε)` grid in `[1e-2, 1e2]²`.
pub fn polyharmonic_symbol_check(l: u32, n: usize) -> Result<SymbolInequalityReport> {
    let c = polyharmonic_constants(l)?;
    let grid = log_grid(1e-2, 1e2, n.max(2));
    let mut max_ratio = 0.0f64;
    let mut violations = 0;
    for &xi in &grid {
        for &eps in &grid {
            let two_l = 2 * l as i32;
            let lhs = eps.powi(two_l - 1) / (xi.powi(two_l) + eps.powi(two_l));
            let rhs = c.c_tilde * eps / (xi * xi + eps * eps);
            max_ratio = max_ratio.max(lhs / rhs);
            if lhs > rhs * (1.0 + 1e-14) {
                violations += 1;
            }
        }
    }
    // lhs/rhs depends on ε/ξ only, through the profile g
    let (rho, _) = scalar_bound_argsup(l)?;
    let locus = rho * rho;
    Ok(SymbolInequalityReport {
        l,
        grid_points: n * n,
        max_ratio,
        violations,
        locus,
        predicted_locus: c.zeta,
        locus_deviation: (locus - c.zeta).abs(),
    })
}

/// Checks `ε²/(ξ⁴+ε⁴) ≤ a/(ξ²+ε²b)` on an `n × n` grid.
pub fn biharmonic_symbol_check(b: f64, n: usize) -> Result<SymbolInequalityReport> {
    if !(b > 0.0) {
        return domain(format!("b must be positive, got {b}"));
    }
    let a = tilde_prefactor(b);
    let grid = log_grid(1e-2, 1e2, n.max(2));
    let mut max_ratio = 0.0f64;
    let mut violations = 0;
    for &xi in &grid {
        for &eps in &grid {
            let lhs = eps * eps / (xi.powi(4) + eps.powi(4));
            let rhs = a / (xi * xi + eps * eps * b);
            max_ratio = max_ratio.max(lhs / rhs);
            if lhs > rhs * (1.0 + 1e-14) {
                violations += 1;
            }
        }
    }
    // ratio along ε = 1 as a function of ln(ε²/ξ²)
    let ratio = |s: f64| {
        let t = (-s).exp();
        (t + b) / (a * (t * t + 1.0))
    };
    let (s, _) = golden_max(ratio, -10.0, 10.0, 1e-12);
    let locus = s.exp();
    let predicted_locus = 2.0 * a;
    Ok(SymbolInequalityReport {
        l: 2,
        grid_points: n * n,
        max_ratio,
        violations,
        locus,
        predicted_locus,
        locus_deviation: (locus - predicted_locus).abs(),
    })
}

/// Minimiser and minimum of `(b + √(b²+1)) / (4√b)` over `b > 0`.
pub fn minimize_biharmonic_prefactor() -> (f64, f64) {
    let (t, v) = golden_max(|t| {
        let b = t.exp();
        -(b + (b * b + 1.0).sqrt()) / (4.0 * b.sqrt())
    }, -5.0, 5.0, 1e-12);
    (t.exp(), -v)
}

/// Cauchy density `g_ε(p) = ε / (π (p² + ε²))`.
pub fn cauchy_density(eps: f64, p: f64) -> f64 {
    eps / (std::f64::consts::PI * (p * p + eps * eps))
}

/// Largest deviation of `g_ε = g_{ε'} * g_{ε-ε'}` over the sample points,
/// with the convolution computed by adaptive quadrature.
pub fn cauchy_convolution_defect(eps: f64, eps_prime: f64, points: &[f64]) -> Result<f64> {
    if !(eps > eps_prime && eps_prime > 0.0) {
        return domain(format!("need eps > eps' > 0, got {eps}, {eps_prime}"));
    }
    let rest = eps - eps_prime;
    let mut worst = 0.0f64;
    for &p in points {
        let f = |q: f64| cauchy_density(eps_prime, q) * cauchy_density(rest, p - q);
        let right = integrate_to_infinity(f, 0.0, 1e-14, 1e-12, 2000)?;
        let left = integrate_to_infinity(|q: f64| f(-q), 0.0, 1e-14, 1e-12, 2000)?;
        let conv = right.value + left.value;
        worst = worst.max((conv - cauchy_density(eps, p)).abs());
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonotonicityReport {
    pub eps_list: Vec<f64>,
    pub b: f64,
    /// Ky-Fan partial sums of `𝓛̃_ε` for each ε in order.
    pub partial_sums: Vec<Vec<f64>>,
    /// Partial sums of the rank-one limit `𝓛̃_0`.
    pub limit_partial_sums: Vec<f64>,
    pub traces: Vec<f64>,
    /// `(a/2√b) ∫ W²`
    pub expected_trace: f64,
    pub trace_deviation: f64,
    /// Largest `‖𝓛̃_ε‖_n - ‖𝓛̃_{ε'}‖_n` over consecutive pairs and against `ε = 0`.
    pub worst_violation: f64,
    /// Largest `λ_j(𝓛_ε) - λ_j(𝓛̃_ε)` over positive ε.
    pub worst_domination: f64,
    pub tolerance: f64,
    pub passed: bool,
}

/// Verifies that partial traces of `𝓛̃_ε` do not decrease as ε decreases,
/// that the full trace is constant and that `λ_j(𝓛_ε) ≤ λ_j(𝓛̃_ε)`.
pub fn lemma_monotonicity_check(w: &SampledWeight, eps_list: &[f64], b: f64, tolerance: f64) -> Result<MonotonicityReport> {
    if eps_list.is_empty() {
        return validation("eps list is empty");
    }
    if eps_list.windows(2).any(|p| !(p[0] > p[1])) || eps_list.iter().any(|&e| !(e >= 0.0)) {
        return validation("eps list must be nonnegative and strictly decreasing");
    }
    let n = w.values.len();
    let mut partial_sums = Vec::with_capacity(eps_list.len());
    let mut traces = Vec::with_capacity(eps_list.len());
    let mut worst_domination = f64::NEG_INFINITY;
    for &eps in eps_list {
        let tilde = build_l_tilde_kernel(w, eps, b)?;
        traces.push(tilde.trace());
        partial_sums.push(ky_fan_norms(&tilde.matrix, n)?);
        if eps > 0.0 {
            let plain = build_l_kernel(w, eps)?;
            let lp = plain.eigenvalues()?;
            let lt = tilde.eigenvalues()?;
            for (x, y) in lp.iter().zip(&lt) {
                worst_domination = worst_domination.max(x - y);
            }
        }
    }
    let limit = build_l_tilde_kernel(w, 0.0, b)?;
    let limit_partial_sums = ky_fan_norms(&limit.matrix, n)?;

    let mut worst_violation = f64::NEG_INFINITY;
    for pair in partial_sums.windows(2) {
        for (larger_eps, smaller_eps) in pair[0].iter().zip(&pair[1]) {
            worst_violation = worst_violation.max(larger_eps - smaller_eps);
        }
    }
    for sums in &partial_sums {
        for (x, y) in sums.iter().zip(&limit_partial_sums) {
            worst_violation = worst_violation.max(x - y);
        }
    }
    let expected_trace = tilde_prefactor(b) / (2.0 * b.sqrt()) * w.l2_norm_squared();
    let trace_deviation = traces
        .iter()
        .map(|t| (t - expected_trace).abs())
        .fold(0.0, f64::max);
    let passed = worst_violation <= tolerance
        && trace_deviation <= tolerance
        && (worst_domination <= tolerance || !worst_domination.is_finite());
    Ok(MonotonicityReport {
        eps_list: eps_list.to_vec(),
        b,
        partial_sums,
        limit_partial_sums,
        traces,
        expected_trace,
        trace_deviation,
        worst_violation,
        worst_domination,
        tolerance,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian_weight(points: usize) -> SampledWeight {
        SampledWeight::from_fn(TrapezoidRule::new(8.0, points).unwrap(), |x| (-x * x).exp()).unwrap()
    }

    #[test]
    fn ky_fan_examples() {
        let id = DMatrix::<f64>::identity(3, 3);
        assert_eq!(ky_fan_norms(&id, 2).unwrap()[1], 2.0);
        let d = DMatrix::from_row_slice(2, 2, &[3.0, 0.0, 0.0, 1.0]);
        assert_eq!(ky_fan_norms(&d, 1).unwrap()[0], 3.0);
        assert!(ky_fan_norms(&d, 3).is_err());
        let ns = DMatrix::from_row_slice(2, 2, &[0.0, 2.0, 0.0, 0.0]);
        assert!((ky_fan_norms(&ns, 2).unwrap()[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn majorization_examples() {
        let a = DMatrix::from_row_slice(2, 2, &[2.0, 1.0, 1.0, -3.0]);
        assert!(majorizes(&a, &a).unwrap());
        assert!(majorizes(&a, &(&a * 0.5)).unwrap());
        assert!(!majorizes(&(&a * 0.5), &a).unwrap());
        assert!(majorizes(&a, &DMatrix::zeros(3, 3)).is_err());
    }

    #[test]
    fn tilde_kernel_domain_and_zero_weight() {
        let w = gaussian_weight(33);
        assert!(build_l_kernel(&w, 0.0).is_err());
        assert!(build_l_tilde_kernel(&w, 0.0, 0.5).is_ok());
        let zero = SampledWeight::from_fn(TrapezoidRule::new(8.0, 33).unwrap(), |_| 0.0).unwrap();
        let (l, lt) = build_l_kernels(&zero, 1.0, 0.5).unwrap();
        assert_eq!(l.matrix.abs().max(), 0.0);
        assert_eq!(lt.matrix.abs().max(), 0.0);
        assert!(SampledWeight::from_fn(TrapezoidRule::new(1.0, 5).unwrap(), |_| -1.0).is_err());
    }

    #[test]
    fn scalar_bound_values() {
        assert!((scalar_bound_sup(2).unwrap() - (1.0 + 2f64.sqrt()) / 2.0).abs() < 1e-10);
        assert!((scalar_bound_sup(3).unwrap() - 4.0 / 3.0).abs() < 1e-10);
        for l in 2..=6 {
            let (rho, v) = scalar_bound_argsup(l).unwrap();
            let r2 = rho * rho;
            assert!(((l - 1) as f64 + l as f64 * r2 - r2.powi(l as i32)).abs() < 1e-6);
            assert!((v - polyharmonic_constants(l).unwrap().c_tilde).abs() < 1e-10);
        }
        assert!(scalar_bound_sup(1).is_err());
    }

    #[test]
    fn prefactor_minimum() {
        let (b, v) = minimize_biharmonic_prefactor();
        assert!((b - 1.0 / 3f64.sqrt()).abs() < 1e-6);
        assert!((v - 3f64.powf(0.75) / 4.0).abs() < 1e-12);
    }

    #[test]
    fn symbol_inequalities() {
        for l in 2..=4 {
            let r = polyharmonic_symbol_check(l, 50).unwrap();
            assert_eq!(r.violations, 0);
            assert!(r.locus_deviation < 1e-6, "{r:?}");
        }
        let r = biharmonic_symbol_check(1.0 / 3f64.sqrt(), 50).unwrap();
        assert_eq!(r.violations, 0);
        assert!(r.locus_deviation < 1e-6, "{r:?}");
        assert!(biharmonic_symbol_gap(0.5, 0.7, 1.1) >= 0.0);
        assert!(polyharmonic_symbol_gap(3, 4.0 / 3.0, 0.7, 1.1) >= 0.0);
    }

    #[test]
    fn cauchy_semigroup() {
        let pts: Vec<f64> = (-8..=8).map(|i| 0.5 * i as f64).collect();
        assert!(cauchy_convolution_defect(1.0, 0.3, &pts).unwrap() < 1e-10);
        assert!(cauchy_convolution_defect(1.0, 1.0, &pts).is_err());
    }

    #[test]
    fn monotonicity_on_gaussian() {
        let w = gaussian_weight(121);
        let r = lemma_monotonicity_check(&w, &[2.0, 1.0, 0.5, 0.0], 1.0 / 3f64.sqrt(), 1e-8).unwrap();
        assert!(r.passed, "{r:?}");
        assert!(lemma_monotonicity_check(&w, &[1.0, 2.0], 0.5, 1e-8).is_err());
    }
}
