//! Bracketed scalar root finding and one-dimensional maximisation.

use crate::error::{Error, Result};

/// Result of a bracketed search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub iterations: usize,
}

/// Bisection on `[lo, hi]` until the bracket is narrower than `width`.
///
/// Returns the final bracket. `f(lo)` and `f(hi)` must differ in sign.
pub fn bisect<F>(mut f: F, mut lo: f64, mut hi: f64, width: f64, max_iter: usize) -> Result<(f64, f64, usize)>
where
    F: FnMut(f64) -> f64,
{
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok((lo, lo, 0));
    }
    if f_hi == 0.0 {
        return Ok((hi, hi, 0));
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::Solver(format!(
            "no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}"
        )));
    }
    let mut iterations = 0;
    while (hi - lo).abs() > width {
        if iterations >= max_iter {
            return Err(Error::Convergence {
                what: "bisection",
                achieved: (hi - lo).abs(),
                requested: width,
            });
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        iterations += 1;
        if f_mid == 0.0 {
            return Ok((mid, mid, iterations));
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok((lo, hi, iterations))
}

/// Bisection down to `switch_width`, then Newton steps polished to relative
/// step size `tol`. Newton iterates that leave the bracket fall back to a
/// bisection step.
pub fn bisect_newton<F, D>(
    mut f: F,
    mut df: D,
    lo: f64,
    hi: f64,
    switch_width: f64,
    tol: f64,
) -> Result<Root>
where
    F: FnMut(f64) -> f64,
    D: FnMut(f64) -> f64,
{
    let (mut lo, mut hi, mut iterations) = bisect(&mut f, lo, hi, switch_width, 200)?;
    if lo == hi {
        return Ok(Root { x: lo, iterations });
    }
    let f_lo = f(lo);
    let mut x = 0.5 * (lo + hi);
    for _ in 0..100 {
        iterations += 1;
        let fx = f(x);
        if fx == 0.0 {
            return Ok(Root { x, iterations });
        }
        if fx.signum() == f_lo.signum() {
            lo = x;
        } else {
            hi = x;
        }
        let slope = df(x);
        let mut next = x - fx / slope;
        if !next.is_finite() || next <= lo.min(hi) || next >= lo.max(hi) {
            next = 0.5 * (lo + hi);
        }
        let step = (next - x).abs();
        x = next;
        if step <= tol * x.abs().max(f64::MIN_POSITIVE) {
            return Ok(Root { x, iterations });
        }
    }
    Err(Error::Convergence {
        what: "newton polish",
        achieved: (hi - lo).abs(),
        requested: tol,
    })
}

/// Golden-section maximisation of a unimodal function on `[lo, hi]`.
///
/// Returns `(argmax, max)`.
pub fn golden_max<F>(mut f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let mut fa = f(a);
    let mut fb = f(b);
    while (hi - lo).abs() > tol * (1.0 + lo.abs().max(hi.abs())) {
        if fa < fb {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = f(b);
        } else {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = f(a);
        }
    }
    if fa >= fb {
        (a, fa)
    } else {
        (b, fb)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bisection_finds_sqrt2() {
        let (lo, hi, _) = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-12, 100).unwrap();
        assert!((0.5 * (lo + hi) - 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn bisection_rejects_missing_sign_change() {
        assert!(matches!(
            bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-10, 100),
            Err(Error::Solver(_))
        ));
    }

    #[test]
    fn newton_polish_reaches_machine_precision() {
        let r = bisect_newton(|x| x.powi(3) - 8.0, |x| 3.0 * x * x, 1.0, 5.0, 1e-8, 1e-15).unwrap();
        assert!((r.x - 2.0).abs() < 1e-14);
    }

    #[test]
    fn golden_section_on_parabola() {
        let (x, v) = golden_max(|x| -(x - 0.3).powi(2) + 1.0, -2.0, 2.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-8);
        assert!((v - 1.0).abs() < 1e-15);
    }
}
