//! Resolvent kernel of `(-∂²)^l + κ` on the real line.
//!
//! `G_κ(x) = (2π)^{-1} ∫ e^{iξx} / (ξ^{2l} + κ) dξ` is evaluated by residues
//! at the `l` roots of `ξ^{2l} = -κ` in the upper half-plane. A direct
//! quadrature of the Fourier integral serves as an independent check and is
//! the only route for non-integer `l`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{domain, Error, Result};
use crate::quadrature::integrate;

/// Roots of the symbol equation `ξ^{2l} = -κ`.
///
/// `roots[k] = i · r_k · κ^{1/(2l)}` with `r_k = exp(i π (2k+1-l)/(2l))`, so
/// indices `0..l` (where `Re r_k > 0`) lie in the upper half-plane.
#[derive(Debug, Clone, PartialEq)]
pub struct SymbolRoots {
    pub l: u32,
    pub kappa: f64,
    pub roots: Vec<Complex64>,
}

impl SymbolRoots {
    /// The `l` roots with positive imaginary part.
    pub fn upper(&self) -> &[Complex64] {
        &self.roots[..self.l as usize]
    }

    /// `r_k κ^{1/(2l)}`: exponents of the basic solutions `exp(r_k κ^{1/(2l)} x)`
    /// of `(-∂²)^l u = -κ u`.
    pub fn exponents(&self) -> Vec<Complex64> {
        self.roots.iter().map(|z| -Complex64::i() * z).collect()
    }
}

/// `r_k = exp(i π (2k + 1 - l) / (2l))`, `k = 0..2l`.
pub fn unit_exponent_roots(l: u32) -> Vec<Complex64> {
    let lf = l as f64;
    (0..2 * l)
        .map(|k| Complex64::from_polar(1.0, PI * (2.0 * k as f64 + 1.0 - lf) / (2.0 * lf)))
        .collect()
}

pub fn symbol_roots(l: u32, kappa: f64) -> Result<SymbolRoots> {
    if l == 0 {
        return domain("symbol roots need l >= 1");
    }
    if !(kappa > 0.0) || !kappa.is_finite() {
        return domain(format!("spectral shift kappa must be positive, got {kappa}"));
    }
    let scale = kappa.powf(1.0 / (2.0 * l as f64));
    let roots = unit_exponent_roots(l)
        .into_iter()
        .map(|r| Complex64::i() * r * scale)
        .collect();
    Ok(SymbolRoots { l, kappa, roots })
}

/// Residue-sum evaluator for a fixed `(l, κ)`.
#[derive(Debug, Clone)]
pub struct ResolventKernel {
    l: u32,
    kappa: f64,
    scale: f64,
    upper: Vec<Complex64>,
}

impl ResolventKernel {
    pub fn new(l: u32, kappa: f64) -> Result<Self> {
        let roots = symbol_roots(l, kappa)?;
        Ok(Self {
            l,
            kappa,
            scale: kappa.powf(1.0 / (2.0 * l as f64)),
            upper: roots.upper().to_vec(),
        })
    }

    pub fn l(&self) -> u32 {
        self.l
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// `G_κ(x)`; even in `x`.
    pub fn eval(&self, x: f64) -> f64 {
        let ax = x.abs();
        if self.scale * ax > 700.0 * self.l as f64 {
            return 0.0;
        }
        // residue of e^{iξx}/(ξ^{2l}+κ) at z is e^{izx}/(2l z^{2l-1}) = -z e^{izx}/(2lκ)
        let sum: Complex64 = self
            .upper
            .iter()
            .map(|&z| z * (Complex64::i() * z * ax).exp())
            .sum();
        let value = -Complex64::i() * sum / (2.0 * self.l as f64 * self.kappa);
        value.re
    }
}

/// `G_κ(x)` by residues; `l` must be a positive integer.
pub fn green_kernel(l: u32, kappa: f64, x: f64) -> Result<f64> {
    Ok(ResolventKernel::new(l, kappa)?.eval(x))
}

/// Diagonal value `G_κ(0) = κ^{-ν} / (2l sin(π/(2l)))`, `ν = 1 - 1/(2l)`.
pub fn green_diagonal(l: f64, kappa: f64) -> f64 {
    let nu = 1.0 - 1.0 / (2.0 * l);
    kappa.powf(-nu) / (2.0 * l * (PI / (2.0 * l)).sin())
}

const QUAD_TOL: f64 = 1e-10;
const PIECE_TOL: f64 = 1e-13;
const ACCEL_TERMS: usize = 48;

/// `G_κ(x)` by direct quadrature of the Fourier integral; accepts real `l >= 1`.
///
/// For `x = 0` the half-line integral is split at 1 and the tail mapped by
/// `ξ = 1/t`. For `x ≠ 0` the integral is cut at the zeros of `cos(ξx)`; the
/// resulting alternating series is summed directly over its leading terms and
/// by repeated averaging over the rest. Fails with [`Error::Convergence`]
/// when the accumulated error estimate exceeds `1e-10`.
pub fn green_kernel_quadrature(l: f64, kappa: f64, x: f64) -> Result<f64> {
    if !(l >= 1.0) || !l.is_finite() {
        return domain(format!("order l must be >= 1, got {l}"));
    }
    if !(kappa > 0.0) || !kappa.is_finite() {
        return domain(format!("spectral shift kappa must be positive, got {kappa}"));
    }
    let two_l = 2.0 * l;
    let symbol = move |xi: f64| 1.0 / (xi.powf(two_l) + kappa);
    let omega = x.abs();
    let mut err = 0.0;
    let total = if omega == 0.0 {
        let head = integrate(symbol, 0.0, 1.0, PIECE_TOL, 0.0, 2000)?;
        let tail = integrate(
            |t: f64| t.powf(two_l - 2.0) / (1.0 + kappa * t.powf(two_l)),
            0.0,
            1.0,
            PIECE_TOL,
            0.0,
            2000,
        )?;
        err += head.error + tail.error;
        head.value + tail.value
    } else {
        let f = |xi: f64| (omega * xi).cos() * symbol(xi);
        let half = PI / omega;
        let first = integrate(f, 0.0, 0.5 * half, PIECE_TOL, 0.0, 2000)?;
        err += first.error;
        let piece = |k: usize| -> Result<(f64, f64)> {
            let a = (k as f64 + 0.5) * half;
            let e = integrate(f, a, a + half, PIECE_TOL, 0.0, 2000)?;
            Ok((e.value, e.error))
        };
        // sum directly until the symbol varies slowly on the half-period scale
        let direct_terms = ((4.0 * kappa.powf(1.0 / two_l) / half).ceil() as usize).max(2);
        let mut sum = first.value;
        for k in 0..direct_terms {
            let (v, e) = piece(k)?;
            sum += v;
            err += e;
        }
        let mut partial = Vec::with_capacity(ACCEL_TERMS + 1);
        let mut running = 0.0;
        partial.push(running);
        for k in direct_terms..direct_terms + ACCEL_TERMS {
            let (v, e) = piece(k)?;
            running += v;
            err += e;
            partial.push(running);
        }
        // repeated averaging of partial sums of the alternating tail
        let mut level = partial;
        let mut previous_last = *level.last().unwrap();
        let mut accel_err = f64::INFINITY;
        while level.len() > 2 {
            level = level.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect();
            let last = *level.last().unwrap();
            accel_err = (last - previous_last).abs();
            previous_last = last;
        }
        err += accel_err;
        sum + previous_last
    };
    let value = total / PI;
    let err = err / PI;
    if err > QUAD_TOL {
        return Err(Error::Convergence {
            what: "Green kernel quadrature",
            achieved: err,
            requested: QUAD_TOL,
        });
    }
    Ok(value)
}
