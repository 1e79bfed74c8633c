//! Negative spectra of `(-∂²)^l - Σ c_j δ_{x_j}` on the line.
//!
//! The main route is the Birman-Schwinger matrix
//! `M_ij(κ) = √c_i G_κ(x_i - x_j) √c_j`: `-κ` is an eigenvalue exactly when
//! `1` is an eigenvalue of `M(κ)`, and every eigenvalue of `M(κ)` is strictly
//! decreasing in `κ`. The Wronskian construction for a single site
//! ([`appendix_secular_solution`]) is an independent second route.

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::constants::ground_state_constant_1d;
use crate::error::{domain, validation, Error, Result};
use crate::greens::{unit_exponent_roots, ResolventKernel};
use crate::linalg::jacobi_eigen;
use crate::roots::bisect;

/// Relative tolerance for located eigenvalues.
pub const EIGENVALUE_TOL: f64 = 1e-12;

/// Relative bracket width at which bisection in `ln κ` stops.
const BISECTION_WIDTH: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DeltaSite {
    pub position: f64,
    pub strength: f64,
}

/// Finite set of attractive point interactions, sorted by position.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeltaPotential {
    sites: Vec<DeltaSite>,
}

impl DeltaPotential {
    pub fn new(sites: impl IntoIterator<Item = (f64, f64)>) -> Result<Self> {
        let mut sites: Vec<DeltaSite> = sites
            .into_iter()
            .map(|(position, strength)| DeltaSite { position, strength })
            .collect();
        for s in &sites {
            if !s.position.is_finite() {
                return validation(format!("delta position must be finite, got {}", s.position));
            }
            if !(s.strength > 0.0) || !s.strength.is_finite() {
                return validation(format!("delta strength must be positive, got {}", s.strength));
            }
        }
        sites.sort_by(|a, b| a.position.total_cmp(&b.position));
        if sites.windows(2).any(|w| w[0].position == w[1].position) {
            return validation("delta positions must be distinct");
        }
        Ok(Self { sites })
    }

    /// `c δ_0`.
    pub fn single(strength: f64) -> Result<Self> {
        Self::new([(0.0, strength)])
    }

    pub fn sites(&self) -> &[DeltaSite] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn total_strength(&self) -> f64 {
        self.sites.iter().map(|s| s.strength).sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SpectrumMethod {
    BirmanSchwinger,
    DenseEigensolver,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverMeta {
    pub method: SpectrumMethod,
    pub tolerance: f64,
    /// Bisection steps spent on each eigenvalue (empty for dense solves).
    pub iterations: Vec<usize>,
}

/// Negative eigenvalues `-κ_j`, stored as `κ_j > 0` in descending order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Spectrum {
    pub kappas: Vec<f64>,
    /// `true` where an eigenvalue coincides with a neighbour within tolerance.
    pub degenerate: Vec<bool>,
    pub meta: SolverMeta,
}

impl Spectrum {
    pub fn from_kappas(mut kappas: Vec<f64>, meta: SolverMeta) -> Self {
        kappas.sort_by(|a, b| b.total_cmp(a));
        let n = kappas.len();
        let mut degenerate = vec![false; n];
        for i in 1..n {
            if (kappas[i - 1] - kappas[i]).abs() <= 1e3 * meta.tolerance * kappas[i - 1] {
                degenerate[i - 1] = true;
                degenerate[i] = true;
            }
        }
        Self { kappas, degenerate, meta }
    }

    pub fn len(&self) -> usize {
        self.kappas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kappas.is_empty()
    }
}

/// Birman-Schwinger matrix `√c_i G_κ(x_i - x_j) √c_j`.
pub fn bs_matrix(l: u32, kappa: f64, pot: &DeltaPotential) -> Result<DMatrix<f64>> {
    let kernel = ResolventKernel::new(l, kappa)?;
    Ok(bs_matrix_with(&kernel, pot))
}

fn bs_matrix_with(kernel: &ResolventKernel, pot: &DeltaPotential) -> DMatrix<f64> {
    let s = pot.sites();
    let n = s.len();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = (s[i].strength * s[j].strength).sqrt() * kernel.eval(s[i].position - s[j].position);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

/// Eigenvalues of the Birman-Schwinger matrix in descending order.
pub fn bs_eigenvalues(l: u32, kappa: f64, pot: &DeltaPotential) -> Result<Vec<f64>> {
    let mut v = jacobi_eigen(&bs_matrix(l, kappa, pot)?).values;
    v.reverse();
    Ok(v)
}

/// Number of Birman-Schwinger eigenvalues strictly above one, i.e. the number
/// of operator eigenvalues below `-κ`.
pub fn count_bs_above_one(l: u32, kappa: f64, pot: &DeltaPotential) -> Result<usize> {
    if pot.is_empty() {
        ResolventKernel::new(l, kappa)?;
        return Ok(0);
    }
    Ok(bs_eigenvalues(l, kappa, pot)?.into_iter().filter(|&m| m > 1.0).count())
}

/// Closed-form single-site eigenvalue `κ = (L⁰ c)^{1/ν}`.
pub fn single_delta_kappa(l: u32, c: f64) -> f64 {
    let nu = 1.0 - 1.0 / (2.0 * l as f64);
    (ground_state_constant_1d(l as f64) * c).powf(1.0 / nu)
}

/// All negative eigenvalues by monotone bisection on each Birman-Schwinger
/// branch.
pub fn negative_spectrum_delta(l: u32, pot: &DeltaPotential) -> Result<Spectrum> {
    if l == 0 {
        return domain("order l must be >= 1");
    }
    if pot.is_empty() {
        return domain("delta potential has no sites");
    }
    let n = pot.len();
    let count = |kappa: f64| count_bs_above_one(l, kappa, pot);

    // merging all sites into one gives the largest possible eigenvalue
    let mut kappa_max = 2.0 * single_delta_kappa(l, pot.total_strength());
    let mut guard = 0;
    while count(kappa_max)? > 0 {
        kappa_max *= 2.0;
        guard += 1;
        if guard > 60 {
            return Err(Error::Solver("could not find an eigenvalue-free upper bracket".into()));
        }
    }
    let mut kappa_min = kappa_max;
    let mut total = 0;
    let mut stable_decades = 0;
    while kappa_min > kappa_max * 1e-30 {
        kappa_min /= 10.0;
        let c = count(kappa_min)?;
        if c == total {
            stable_decades += 1;
        } else {
            total = c;
            stable_decades = 0;
        }
        if total == n || (total > 0 && stable_decades >= 8) {
            break;
        }
    }
    if total == 0 {
        return Err(Error::Solver(format!(
            "no eigenvalue found in [{kappa_min:e}, {kappa_max:e}]"
        )));
    }

    let mut kappas = Vec::with_capacity(total);
    let mut iterations = Vec::with_capacity(total);
    let mut upper = kappa_max;
    for j in 0..total {
        let branch = |ln_kappa: f64| -> f64 {
            match bs_eigenvalues(l, ln_kappa.exp(), pot) {
                Ok(v) => v[j] - 1.0,
                Err(_) => f64::NAN,
            }
        };
        let (lo, hi, it) = bisect(branch, kappa_min.ln(), upper.ln(), BISECTION_WIDTH, 400)
            .map_err(|e| Error::Solver(format!("bracketing eigenvalue {j} failed: {e}")))?;
        let kappa = (0.5 * (lo + hi)).exp();
        kappas.push(kappa);
        iterations.push(it);
        upper = kappa * (1.0 + 1e-9);
    }
    Ok(Spectrum::from_kappas(
        kappas,
        SolverMeta {
            method: SpectrumMethod::BirmanSchwinger,
            tolerance: EIGENVALUE_TOL,
            iterations,
        },
    ))
}

/// Eigenfunction `u(x) = Σ_j β_j √c_j G_κ(x - x_j)` with `β` the
/// Birman-Schwinger eigenvector for eigenvalue one.
#[derive(Debug, Clone)]
pub struct Eigenfunction {
    kernel: ResolventKernel,
    sites: Vec<DeltaSite>,
    weights: Vec<f64>,
    /// Distance of the matched Birman-Schwinger eigenvalue from one.
    pub bs_defect: f64,
}

impl Eigenfunction {
    pub fn eval(&self, x: f64) -> f64 {
        self.sites
            .iter()
            .zip(&self.weights)
            .map(|(s, w)| w * self.kernel.eval(x - s.position))
            .sum()
    }
}

/// Builds the eigenfunction at an eigenvalue `-κ`.
pub fn eigenfunction(l: u32, pot: &DeltaPotential, kappa: f64) -> Result<Eigenfunction> {
    let kernel = ResolventKernel::new(l, kappa)?;
    let eig = jacobi_eigen(&bs_matrix_with(&kernel, pot));
    let (idx, defect) = eig
        .values
        .iter()
        .enumerate()
        .map(|(i, &m)| (i, (m - 1.0).abs()))
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .ok_or_else(|| Error::Domain("delta potential has no sites".into()))?;
    if defect > 1e-8 {
        return domain(format!(
            "kappa = {kappa} is not an eigenvalue: closest Birman-Schwinger eigenvalue differs from 1 by {defect:e}"
        ));
    }
    let beta: Vec<f64> = eig.vectors.column(idx).iter().copied().collect();
    let pivot = beta.iter().copied().fold(0.0f64, |a, b| if b.abs() > a.abs() { b } else { a });
    let sign = if pivot < 0.0 { -1.0 } else { 1.0 };
    let weights = pot
        .sites()
        .iter()
        .zip(&beta)
        .map(|(s, b)| sign * b * s.strength.sqrt())
        .collect();
    Ok(Eigenfunction {
        kernel,
        sites: pot.sites().to_vec(),
        weights,
        bs_defect: defect,
    })
}

pub fn eigenfunction_value(l: u32, pot: &DeltaPotential, kappa: f64, x: f64) -> Result<f64> {
    Ok(eigenfunction(l, pot, kappa)?.eval(x))
}

/// Smallest `x₀ > 0` where the ground state of `(-∂²)^l - δ_0` vanishes.
pub fn find_eigenfunction_zero(l: u32) -> Result<f64> {
    let pot = DeltaPotential::single(1.0)?;
    let spectrum = negative_spectrum_delta(l, &pot)?;
    let kappa = spectrum.kappas[0];
    let u = eigenfunction(l, &pot, kappa)?;
    let scale = kappa.powf(-1.0 / (2.0 * l as f64));
    let step = scale / 200.0;
    let steps = (50.0 * scale / step).ceil() as usize;
    let mut prev = u.eval(0.0);
    for i in 1..=steps {
        let x = i as f64 * step;
        let cur = u.eval(x);
        if cur == 0.0 {
            return Ok(x);
        }
        if cur.signum() != prev.signum() {
            let (lo, hi, _) = bisect(|t| u.eval(t), x - step, x, 1e-12, 200)?;
            return Ok(0.5 * (lo + hi));
        }
        prev = cur;
    }
    Err(Error::Solver(format!(
        "ground state of order {l} has no sign change on (0, {}]",
        50.0 * scale
    )))
}

/// Diagnostics of the Wronskian-matrix construction for `(-∂²)^l - c δ_0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SecularSolution {
    pub kappa: f64,
    /// `max |G⁻¹_numeric - G⁻¹_formula|` relative to the largest entry.
    pub inverse_formula_deviation: f64,
    /// Imaginary part of the secular determinant at the root.
    pub secular_imag: f64,
    /// Largest growing-mode coefficient of the solution on `(0, ∞)`.
    pub decay_residual: f64,
    /// Relative residual of `∂^{2l-1}u(0+) - ∂^{2l-1}u(0-) = (-1)^l c u(0)`.
    pub jump_residual: f64,
}

fn complex_inverse(m: &DMatrix<Complex64>) -> Result<DMatrix<Complex64>> {
    m.clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| Error::Solver("Wronskian matrix is singular".into()))
}

/// Wronskian matrix `𝔊(0)[n][k] = (r_k q)^n` with `q = κ^{1/(2l)}`.
fn wronskian(r: &[Complex64], q: f64) -> DMatrix<Complex64> {
    let m = r.len();
    DMatrix::from_fn(m, m, |n, k| (r[k] * q).powu(n as u32))
}

/// `(-1)^l c 𝔊⁻¹(0) 𝔈(0)` where 𝔈 has the row of ones in its last row.
fn coupling_block(r: &[Complex64], q: f64, c: f64, l: u32) -> Result<DMatrix<Complex64>> {
    let m = r.len();
    let inv = complex_inverse(&wronskian(r, q))?;
    let sign = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(DMatrix::from_fn(m, m, |a, _| inv[(a, m - 1)] * sign * c))
}

fn secular_determinant(r: &[Complex64], q: f64, c: f64, l: u32) -> Result<Complex64> {
    let block = coupling_block(r, q, c, l)?;
    let lu = l as usize;
    let sub = DMatrix::from_fn(lu, lu, |i, j| {
        let id = if i == j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) };
        id + block[(i, j)]
    });
    Ok(sub.determinant())
}

/// Solves the secular condition of the explicit matching construction at 0.
///
/// Exponents `r_k κ^{1/(2l)}` with `Re r_k > 0` for `k < l` describe the
/// solution on `(-∞, 0)`, the rest on `(0, ∞)`; the coefficient jump is
/// `(I + (-1)^l c 𝔊⁻¹𝔈) v = h`, and a decaying solution exists iff
/// `det(I + B) = 0` for its upper-left `l × l` block `B`.
pub fn appendix_secular_solution(l: u32, c: f64) -> Result<SecularSolution> {
    if l == 0 {
        return domain("order l must be >= 1");
    }
    if !(c > 0.0) || !c.is_finite() {
        return domain(format!("coupling must be positive, got {c}"));
    }
    let r = unit_exponent_roots(l);
    let two_l = 2.0 * l as f64;
    let f = |ln_kappa: f64| -> f64 {
        let q = (ln_kappa / two_l).exp();
        secular_determinant(&r, q, c, l).map(|d| d.re).unwrap_or(f64::NAN)
    };
    // det(I + B) = 1 + t κ^{-ν} with t < 0: negative for small κ, tends to 1
    let mut lo = 0.0f64;
    let mut hi = 0.0f64;
    while f(lo) >= 0.0 {
        lo -= 5.0;
        if lo < -700.0 {
            return Err(Error::Solver("secular determinant has no lower bracket".into()));
        }
    }
    while f(hi) <= 0.0 {
        hi += 5.0;
        if hi > 700.0 {
            return Err(Error::Solver("secular determinant has no upper bracket".into()));
        }
    }
    let (a, b, _) = bisect(f, lo, hi, 1e-15, 400)?;
    let ln_kappa = 0.5 * (a + b);
    let kappa = ln_kappa.exp();
    let q = kappa.powf(1.0 / two_l);

    let g = wronskian(&r, q);
    let inv = complex_inverse(&g)?;
    let m = r.len();
    let r0q = r[0] * q;
    let formula = DMatrix::from_fn(m, m, |a, b| {
        let phase = Complex64::from_polar(1.0, std::f64::consts::PI * ((m - a) * b) as f64 / l as f64);
        phase / r0q.powu(b as u32) / two_l
    });
    let scale = inv.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let inverse_formula_deviation = (&inv - &formula).iter().map(|z| z.norm()).fold(0.0, f64::max) / scale;
    let secular_imag = secular_determinant(&r, q, c, l)?.im;

    // null vector of I + τ y eᵀ is y; embed as the left coefficients
    let block = coupling_block(&r, q, c, l)?;
    let lu = l as usize;
    let mut v = nalgebra::DVector::from_element(m, Complex64::new(0.0, 0.0));
    for a in 0..lu {
        v[a] = block[(a, 0)];
    }
    let h = &v + &block * &v;
    let vnorm = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let decay_residual = (0..lu).map(|a| h[a].norm()).fold(0.0, f64::max) / vnorm;
    let top = m - 1;
    let derivative_jump: Complex64 = (0..m).map(|k| g[(top, k)] * (h[k] - v[k])).sum();
    let u0: Complex64 = v.iter().sum();
    let sign = if l.is_multiple_of(2) { 1.0 } else { -1.0 };
    let expected = u0 * sign * c;
    let jump_residual = (derivative_jump - expected).norm() / expected.norm();

    Ok(SecularSolution {
        kappa,
        inverse_formula_deviation,
        secular_imag,
        decay_residual,
        jump_residual,
    })
}

/// `κ` of `(-∂²)^l - c δ_0` from the Wronskian construction alone.
pub fn appendix_secular_kappa(l: u32, c: f64) -> Result<f64> {
    Ok(appendix_secular_solution(l, c)?.kappa)
}

/// 2×2 determinant for `∂⁴ - δ_0` on `(0, ∞)` with the natural boundary
/// conditions `u''(0) = 0`, `u'''(0) = u(0)` of `‖u''‖² - |u(0)|²`.
pub fn halfline_neumann_determinant(kappa: f64) -> Complex64 {
    let r = unit_exponent_roots(2);
    let q = kappa.powf(0.25);
    // decaying exponents on (0, ∞): Re r_k < 0 for k = 2, 3
    let (a, b) = (r[2] * q, r[3] * q);
    let one = Complex64::new(1.0, 0.0);
    a.powu(2) * (b.powu(3) - one) - b.powu(2) * (a.powu(3) - one)
}

/// The unique negative eigenvalue `-κ₊` of the half-line biharmonic problem.
pub fn halfline_neumann_kappa() -> Result<f64> {
    // the determinant is purely imaginary for this root pair
    let f = |ln_kappa: f64| (Complex64::i() * halfline_neumann_determinant(ln_kappa.exp())).re;
    let (a, b, _) = bisect(f, -10.0, 10.0, 1e-15, 400)?;
    Ok((0.5 * (a + b)).exp())
}

/// Spectral data of `(-∂²)^l - δ_0 - α δ_{x₀}` with `x₀` a zero of the
/// single-site ground state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CounterexampleReport {
    pub l: u32,
    pub alpha: f64,
    pub x0: f64,
    /// Ground state `κ₀`.
    pub kappa0: f64,
    /// Hidden-site eigenvalue `κ₁`.
    pub kappa1: f64,
    /// Single-site value `(L⁰)^{1/ν}` that `κ₁` must reproduce.
    pub kappa_single: f64,
    pub kappa1_deviation: f64,
    /// `(κ₀^ν + κ₁^ν) / (1 + α)`
    pub lhs: f64,
    /// `L⁰_{l,ν,1}`
    pub l0: f64,
    pub margin: f64,
    pub strict: bool,
    /// `κ₀^ν ≥ L⁰ α`
    pub variational_bound_holds: bool,
    pub eigenvalue_count: usize,
}

/// Evaluates the two-site construction for one coupling `α > 1`.
pub fn counterexample_report(l: u32, alpha: f64) -> Result<CounterexampleReport> {
    if l < 2 {
        return domain(format!("the hidden-zero construction needs l >= 2, got {l}"));
    }
    if !(alpha > 1.0) || !alpha.is_finite() {
        return domain(format!("alpha must exceed 1, got {alpha}"));
    }
    let x0 = find_eigenfunction_zero(l)?;
    counterexample_at(l, alpha, x0)
}

pub(crate) fn counterexample_at(l: u32, alpha: f64, x0: f64) -> Result<CounterexampleReport> {
    let nu = 1.0 - 1.0 / (2.0 * l as f64);
    let l0 = ground_state_constant_1d(l as f64);

    // ground state of α δ_{x₀} alone evaluated at the origin
    let kappa_alpha = single_delta_kappa(l, alpha);
    let shifted = ResolventKernel::new(l, kappa_alpha)?;
    let ratio = shifted.eval(x0) / shifted.eval(0.0);
    if ratio.abs() < 1e-6 {
        return Err(Error::DegenerateCoupling { alpha, ratio });
    }

    let pot = DeltaPotential::new([(0.0, 1.0), (x0, alpha)])?;
    let spectrum = negative_spectrum_delta(l, &pot)?;
    if spectrum.len() != 2 {
        return Err(Error::Solver(format!(
            "expected two negative eigenvalues, found {}",
            spectrum.len()
        )));
    }
    let kappa0 = spectrum.kappas[0];
    let kappa1 = spectrum.kappas[1];
    let kappa_single = negative_spectrum_delta(l, &DeltaPotential::single(1.0)?)?.kappas[0];
    let lhs = (kappa0.powf(nu) + kappa1.powf(nu)) / (1.0 + alpha);
    Ok(CounterexampleReport {
        l,
        alpha,
        x0,
        kappa0,
        kappa1,
        kappa_single,
        kappa1_deviation: (kappa1 - kappa_single).abs() / kappa_single,
        lhs,
        l0,
        margin: lhs - l0,
        strict: lhs > l0,
        variational_bound_holds: kappa0.powf(nu) >= l0 * alpha * (1.0 - 1e-12),
        eigenvalue_count: spectrum.len(),
    })
}
