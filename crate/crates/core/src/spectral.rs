//! Periodic pseudospectral discretisation of `(-Δ)^l ⊗ 𝟙 + V`,
//! `Σ_j (-∂_j²)^l + V` and `-∂² ⊗ A + V` for matrix-valued potentials sampled
//! on a grid.
//!
//! On the box `[-L, L)^d` with `N` points per axis the kinetic part is the
//! circulant matrix whose eigenvalues are the symbol on the frequency lattice
//! `k_m = π m / L`, `m = -N/2, ..., N/2 - 1`. Grid values are ordered with the
//! matrix index fastest: `(i·m + a)` in 1D and `((i₁·N + i₂)·m + a)` in 2D.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::delta_solver::{SolverMeta, Spectrum, SpectrumMethod};
use crate::error::{validation, Result};
use crate::linalg::{symmetric_eigenvalues, HermitianMatrix};

/// Tolerance on per-sample Hermitian symmetry.
pub const HERMITIAN_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridConfig {
    pub half_width: f64,
    pub points: usize,
    pub dim: usize,
}

impl GridConfig {
    pub fn new(half_width: f64, points: usize, dim: usize) -> Result<Self> {
        if !(half_width > 0.0) || !half_width.is_finite() {
            return validation(format!("box half-width must be positive, got {half_width}"));
        }
        if points < 16 || !points.is_multiple_of(2) {
            return validation(format!("points per axis must be even and >= 16, got {points}"));
        }
        if dim != 1 && dim != 2 {
            return validation(format!("dimension must be 1 or 2, got {dim}"));
        }
        Ok(Self { half_width, points, dim })
    }

    /// Defaults: `L = 20`, `N = 256` in 1D and `N = 64` per axis in 2D.
    pub fn default_for(dim: usize) -> Result<Self> {
        Self::new(20.0, if dim == 2 { 64 } else { 256 }, dim)
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / self.points as f64
    }

    pub fn cell_volume(&self) -> f64 {
        self.spacing().powi(self.dim as i32)
    }

    pub fn num_sites(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn axis(&self) -> Vec<f64> {
        let h = self.spacing();
        (0..self.points).map(|i| -self.half_width + i as f64 * h).collect()
    }

    /// Coordinates of grid site `s`.
    pub fn site(&self, s: usize) -> Vec<f64> {
        let h = self.spacing();
        let coord = |i: usize| -self.half_width + i as f64 * h;
        match self.dim {
            1 => vec![coord(s)],
            _ => vec![coord(s / self.points), coord(s % self.points)],
        }
    }

    /// Frequencies `π m / L` for `m = -N/2, ..., N/2 - 1`.
    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.points as i64;
        (-n / 2..n / 2)
            .map(|m| std::f64::consts::PI * m as f64 / self.half_width)
            .collect()
    }
}

/// Hermitian `m × m` matrix samples on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PotentialField {
    grid: GridConfig,
    m: usize,
    samples: Vec<HermitianMatrix>,
}

impl PotentialField {
    pub fn new(grid: GridConfig, m: usize, samples: Vec<HermitianMatrix>) -> Result<Self> {
        if m == 0 {
            return validation("matrix dimension must be >= 1");
        }
        if samples.len() != grid.num_sites() {
            return validation(format!(
                "expected {} samples, got {}",
                grid.num_sites(),
                samples.len()
            ));
        }
        for (s, v) in samples.iter().enumerate() {
            if v.dim() != m || v.re.ncols() != m {
                return validation(format!("sample {s} is not {m}x{m}"));
            }
            if v.re.iter().chain(v.im.iter().flatten()).any(|x| !x.is_finite()) {
                return validation(format!("sample {s} has a non-finite entry"));
            }
            if v.hermiticity_defect() > HERMITIAN_TOL {
                return validation(format!(
                    "sample {s} is not Hermitian (defect {:e})",
                    v.hermiticity_defect()
                ));
            }
        }
        Ok(Self { grid, m, samples })
    }

    pub fn zero(grid: GridConfig, m: usize) -> Result<Self> {
        let samples = vec![HermitianMatrix::real(DMatrix::zeros(m, m)); grid.num_sites()];
        Self::new(grid, m, samples)
    }

    pub fn from_scalar_fn<F: Fn(&[f64]) -> f64>(grid: GridConfig, f: F) -> Result<Self> {
        let samples = (0..grid.num_sites())
            .map(|s| HermitianMatrix::real(DMatrix::from_element(1, 1, f(&grid.site(s)))))
            .collect();
        Self::new(grid, 1, samples)
    }

    pub fn from_matrix_fn<F: Fn(&[f64]) -> HermitianMatrix>(grid: GridConfig, m: usize, f: F) -> Result<Self> {
        let samples = (0..grid.num_sites()).map(|s| f(&grid.site(s))).collect();
        Self::new(grid, m, samples)
    }

    /// `v(x) · 𝟙_m` for a scalar profile `v`.
    pub fn scalar_times_identity<F: Fn(&[f64]) -> f64>(grid: GridConfig, m: usize, f: F) -> Result<Self> {
        Self::from_matrix_fn(grid, m, |x| {
            HermitianMatrix::real(DMatrix::identity(m, m) * f(x))
        })
    }

    pub fn grid(&self) -> &GridConfig {
        &self.grid
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn samples(&self) -> &[HermitianMatrix] {
        &self.samples
    }

    pub fn is_complex(&self) -> bool {
        self.samples.iter().any(|v| v.im.is_some())
    }

    /// `α V`.
    pub fn scaled(&self, alpha: f64) -> Self {
        let samples = self
            .samples
            .iter()
            .map(|v| HermitianMatrix {
                re: &v.re * alpha,
                im: v.im.as_ref().map(|im| im * alpha),
            })
            .collect();
        Self { grid: self.grid, m: self.m, samples }
    }
}

/// Kinetic symbol selector.
#[derive(Debug, Clone, PartialEq)]
pub enum Symbol {
    /// `|ξ|^{2l}`
    FullLaplacian,
    /// `Σ_j ξ_j^{2l}`
    Separable,
    /// `ξ² A` with `A` positive definite (1D only).
    TensorA(DMatrix<f64>),
}

/// First column of the 1D circulant with symbol `s` on the frequency lattice.
fn circulant_column<S: Fn(f64) -> f64>(grid: &GridConfig, s: S) -> Vec<f64> {
    let n = grid.points;
    let k = grid.frequencies();
    let values: Vec<f64> = k.iter().map(|&x| s(x)).collect();
    let offset = n as i64 / 2;
    (0..n)
        .map(|delta| {
            let mut acc = 0.0;
            for (idx, v) in values.iter().enumerate() {
                let m = idx as i64 - offset;
                let phase = 2.0 * std::f64::consts::PI * ((m * delta as i64).rem_euclid(n as i64)) as f64 / n as f64;
                acc += v * phase.cos();
            }
            acc / n as f64
        })
        .collect()
}

/// 2D table `t(Δ₁, Δ₂)` for the symbol `s(ξ₁, ξ₂)`, stored row-major.
fn circulant_table_2d<S: Fn(f64, f64) -> f64>(grid: &GridConfig, s: S) -> Vec<f64> {
    let n = grid.points;
    let k = grid.frequencies();
    let offset = n as i64 / 2;
    let cos_table: Vec<f64> = (0..n * n)
        .map(|t| {
            let (idx, delta) = (t / n, t % n);
            let m = idx as i64 - offset;
            let phase = 2.0 * std::f64::consts::PI * ((m * delta as i64).rem_euclid(n as i64)) as f64 / n as f64;
            phase.cos()
        })
        .collect();
    // partial[m1][Δ2] = Σ_{m2} s(k_{m1}, k_{m2}) cos(2π m2 Δ2 / N)
    let mut partial = vec![0.0; n * n];
    for m1 in 0..n {
        for m2 in 0..n {
            let v = s(k[m1], k[m2]);
            for d2 in 0..n {
                partial[m1 * n + d2] += v * cos_table[m2 * n + d2];
            }
        }
    }
    let mut table = vec![0.0; n * n];
    for d1 in 0..n {
        for m1 in 0..n {
            let c = cos_table[m1 * n + d1];
            for d2 in 0..n {
                table[d1 * n + d2] += c * partial[m1 * n + d2];
            }
        }
    }
    let norm = (n * n) as f64;
    table.iter_mut().for_each(|t| *t /= norm);
    table
}

/// Matrix of the discretised operator in the grid representation.
pub fn assemble_operator(l: f64, grid: &GridConfig, v: &PotentialField, symbol: &Symbol) -> Result<HermitianMatrix> {
    if !(l >= 1.0) || !l.is_finite() {
        return validation(format!("order l must be >= 1, got {l}"));
    }
    if v.grid() != grid {
        return validation("potential grid does not match the operator grid");
    }
    let m = v.m();
    let n = grid.points;
    let sites = grid.num_sites();
    let dim = sites * m;
    let mut re = DMatrix::zeros(dim, dim);

    match symbol {
        Symbol::TensorA(a) => {
            if grid.dim != 1 {
                return validation("tensor symbol requires d = 1");
            }
            if a.nrows() != m || a.ncols() != m {
                return validation(format!(
                    "A is {}x{} but the potential is {m}x{m}",
                    a.nrows(),
                    a.ncols()
                ));
            }
            check_positive_definite(a)?;
            let t = circulant_column(grid, |k| k * k);
            for i in 0..n {
                for j in 0..n {
                    let tij = t[(i + n - j) % n];
                    for p in 0..m {
                        for q in 0..m {
                            re[(i * m + p, j * m + q)] = tij * a[(p, q)];
                        }
                    }
                }
            }
        }
        Symbol::FullLaplacian | Symbol::Separable if grid.dim == 1 => {
            let t = circulant_column(grid, |k| k.abs().powf(2.0 * l));
            for i in 0..n {
                for j in 0..n {
                    let tij = t[(i + n - j) % n];
                    for p in 0..m {
                        re[(i * m + p, j * m + p)] = tij;
                    }
                }
            }
        }
        Symbol::FullLaplacian | Symbol::Separable => {
            let table = match symbol {
                Symbol::FullLaplacian => circulant_table_2d(grid, |a, b| (a * a + b * b).powf(l)),
                _ => circulant_table_2d(grid, |a, b| a.abs().powf(2.0 * l) + b.abs().powf(2.0 * l)),
            };
            for s in 0..sites {
                let (i1, i2) = (s / n, s % n);
                for r in 0..sites {
                    let (j1, j2) = (r / n, r % n);
                    let t = table[((i1 + n - j1) % n) * n + (i2 + n - j2) % n];
                    for p in 0..m {
                        re[(s * m + p, r * m + p)] = t;
                    }
                }
            }
        }
    }

    let mut im = if v.is_complex() { Some(DMatrix::zeros(dim, dim)) } else { None };
    for (s, sample) in v.samples().iter().enumerate() {
        for p in 0..m {
            for q in 0..m {
                re[(s * m + p, s * m + q)] += sample.re[(p, q)];
                if let (Some(im), Some(si)) = (im.as_mut(), sample.im.as_ref()) {
                    im[(s * m + p, s * m + q)] = si[(p, q)];
                }
            }
        }
    }
    // exact symmetry: the circulant cosine sums can differ in the last bit
    symmetrize(&mut re, 1.0);
    if let Some(im) = im.as_mut() {
        symmetrize(im, -1.0);
    }
    Ok(match im {
        Some(im) => HermitianMatrix::from_parts(re, im),
        None => HermitianMatrix::real(re),
    })
}

fn symmetrize(a: &mut DMatrix<f64>, sign: f64) {
    let n = a.nrows();
    for i in 0..n {
        for j in i + 1..n {
            let v = 0.5 * (a[(i, j)] + sign * a[(j, i)]);
            a[(i, j)] = v;
            a[(j, i)] = sign * v;
        }
        if sign < 0.0 {
            a[(i, i)] = 0.0;
        }
    }
}

pub(crate) fn check_positive_definite(a: &DMatrix<f64>) -> Result<()> {
    let asym = (a - a.transpose()).abs().max();
    if asym > HERMITIAN_TOL * a.abs().max().max(1.0) {
        return validation("A must be symmetric");
    }
    let min = symmetric_eigenvalues(a)?.first().copied().unwrap_or(0.0);
    if !(min > 0.0) {
        return validation(format!("A must be positive definite, smallest eigenvalue {min}"));
    }
    Ok(())
}

/// Negative eigenvalues of `h` below `-1e-10 · max|λ|`.
pub fn negative_spectrum(h: &HermitianMatrix) -> Result<Spectrum> {
    let values = h.eigenvalues()?;
    let scale = values.iter().fold(0.0f64, |a, &x| a.max(x.abs()));
    let floor = 1e-10 * scale;
    let kappas = values.into_iter().filter(|&x| x < -floor).map(|x| -x).collect();
    Ok(Spectrum::from_kappas(
        kappas,
        SolverMeta {
            method: SpectrumMethod::DenseEigensolver,
            tolerance: 1e-12,
            iterations: Vec::new(),
        },
    ))
}

/// `Σ_j κ_j^γ`; `γ = 0` gives the count.
pub fn riesz_mean(s: &Spectrum, gamma: f64) -> f64 {
    if gamma == 0.0 {
        return s.len() as f64;
    }
    s.kappas.iter().map(|k| k.powf(gamma)).sum()
}

fn negative_part_power(v: &HermitianMatrix, p: f64) -> HermitianMatrix {
    v.map_spectrum(|x| if x < 0.0 { (-x).powf(p) } else { 0.0 })
}

/// Grid approximation of `∫ tr V_-(x)^p dx`.
pub fn potential_integral(v: &PotentialField, p: f64) -> Result<f64> {
    if !(p > 0.0) {
        return validation(format!("exponent must be positive, got {p}"));
    }
    let mut total = 0.0;
    for sample in v.samples() {
        if sample.dim() == 1 && sample.im.is_none() {
            let x = sample.re[(0, 0)];
            if x < 0.0 {
                total += (-x).powf(p);
            }
        } else {
            total += sample
                .eigenvalues()?
                .into_iter()
                .filter(|&x| x < 0.0)
                .map(|x| (-x).powf(p))
                .sum::<f64>();
        }
    }
    Ok(total * v.grid().cell_volume())
}

/// Grid approximation of `∫ tr W (V_-(x))^p dx` for a fixed real symmetric
/// weight `W`.
pub fn weighted_potential_integral(v: &PotentialField, p: f64, weight: &DMatrix<f64>) -> Result<f64> {
    if !(p > 0.0) {
        return validation(format!("exponent must be positive, got {p}"));
    }
    if weight.nrows() != v.m() || weight.ncols() != v.m() {
        return validation("weight dimension does not match the potential");
    }
    let mut total = 0.0;
    for sample in v.samples() {
        // tr W (R + iI) = tr W R since W is symmetric and I antisymmetric
        let vp = negative_part_power(sample, p);
        total += (weight * &vp.re).trace();
    }
    Ok(total * v.grid().cell_volume())
}

/// Riesz mean versus a bound `constant · ∫ ...`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundReport {
    pub riesz_mean: f64,
    pub potential_integral: f64,
    pub bound_constant: f64,
    pub ratio: f64,
    pub margin: f64,
    pub verdict: bool,
}

impl BoundReport {
    pub fn new(riesz_mean: f64, potential_integral: f64, bound_constant: f64) -> Self {
        let ratio = if potential_integral > 0.0 {
            riesz_mean / potential_integral
        } else {
            0.0
        };
        Self {
            riesz_mean,
            potential_integral,
            bound_constant,
            ratio,
            margin: bound_constant - ratio,
            verdict: ratio <= bound_constant,
        }
    }
}
