//! Closed-form and root-defined Lieb-Thirring constant families.
//!
//! Notation: `l` is the order of `(-Δ)^l`, `gamma` the Riesz order, `d` the
//! spatial dimension, `kappa = d/(2l)` and `nu = 1 - d/(2l)`.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{domain, validation, Result};
use crate::roots::bisect_newton;
use crate::special::{beta_fn, gamma_fn};

const PARAM_TOL: f64 = 1e-12;

/// The triple `(l, γ, d)` with its derived exponents.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LtParams {
    pub l: f64,
    pub gamma: f64,
    pub d: u32,
    pub kappa: f64,
    pub nu: f64,
}

impl LtParams {
    pub fn new(l: f64, gamma: f64, d: u32) -> Result<Self> {
        if !(l >= 1.0) || !l.is_finite() {
            return validation(format!("order l must be >= 1, got {l}"));
        }
        if !(gamma >= 0.0) || !gamma.is_finite() {
            return validation(format!("Riesz order gamma must be >= 0, got {gamma}"));
        }
        if d == 0 {
            return validation("dimension d must be >= 1");
        }
        let kappa = d as f64 / (2.0 * l);
        Ok(Self { l, gamma, d, kappa, nu: 1.0 - kappa })
    }

    /// Parameters at the critical Riesz order `γ = ν` (requires `d < 2l`).
    pub fn critical(l: f64, d: u32) -> Result<Self> {
        let probe = Self::new(l, 0.0, d)?;
        if probe.nu <= 0.0 {
            return domain(format!("critical order needs d < 2l (l = {l}, d = {d})"));
        }
        Self::new(l, probe.nu, d)
    }

    /// Same `(l, d)` with another Riesz order.
    pub fn with_gamma(&self, gamma: f64) -> Result<Self> {
        Self::new(self.l, gamma, self.d)
    }

    /// Exponent `γ + κ` of the potential integral.
    pub fn potential_power(&self) -> f64 {
        self.gamma + self.kappa
    }

    pub fn integer_order(&self) -> Option<u32> {
        let r = self.l.round();
        ((self.l - r).abs() < PARAM_TOL).then_some(r as u32)
    }

    pub fn is_critical(&self) -> bool {
        (self.gamma - self.nu).abs() <= PARAM_TOL
    }
}

/// `ζ_l`, `c̃_l` and `c_l` for the polyharmonic bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolyharmonicConstants {
    pub l: u32,
    /// Positive root of `(l-1) + l z - z^l = 0`.
    pub zeta: f64,
    /// `ζ_l^(l-1) / l`
    pub c_tilde: f64,
    /// `ζ_l^(l-1) / (2l)`
    pub c_l: f64,
    pub iterations: usize,
}

/// Which upper bound to evaluate in [`riesz_bound_constant`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    /// `3^(3/4)/4`; biharmonic, d = 1, γ = 3/4.
    BiharmonicCritical,
    /// `4/(3^(1/4)√2) · L^cl_{2,γ,1}`; biharmonic, d = 1, γ >= 3/4.
    BiharmonicRiesz,
    /// `c_l`; integer l >= 2, d = 1, γ = 1 - 1/(2l).
    PolyharmonicCritical,
    /// `c_l / L^cl_{l,ν,1} · L^cl_{l,γ,1}`; integer l >= 2, d = 1, γ >= ν.
    PolyharmonicRiesz,
    /// `(c_l / L^cl_{l,ν₁,1})^d · C_{l,γ,d}` with `ν₁ = 1 - 1/(2l)`; any d, γ >= ν₁.
    Lifted,
    /// `(4/(3^(1/4)√2))^d · C_{2,γ,d}`; biharmonic, any d, γ >= 3/4.
    LiftedBiharmonic,
    /// `2 L^cl_{1,γ,1}` for `-d²/dx² ⊗ A + V`; l = 1, d = 1, γ >= 1/2.
    SystemSchrodinger,
}

impl Theorem {
    pub const ALL: [Theorem; 7] = [
        Theorem::BiharmonicCritical,
        Theorem::BiharmonicRiesz,
        Theorem::PolyharmonicCritical,
        Theorem::PolyharmonicRiesz,
        Theorem::Lifted,
        Theorem::LiftedBiharmonic,
        Theorem::SystemSchrodinger,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Theorem::BiharmonicCritical => "biharmonic_critical",
            Theorem::BiharmonicRiesz => "biharmonic_riesz",
            Theorem::PolyharmonicCritical => "polyharmonic_critical",
            Theorem::PolyharmonicRiesz => "polyharmonic_riesz",
            Theorem::Lifted => "lifted",
            Theorem::LiftedBiharmonic => "lifted_biharmonic",
            Theorem::SystemSchrodinger => "system_schrodinger",
        }
    }

    pub fn from_name(name: &str) -> Option<Theorem> {
        Theorem::ALL.into_iter().find(|t| t.name() == name)
    }
}

/// `4 / (3^(1/4) √2)`, the factor relating the biharmonic critical bound to
/// the classical constant.
pub fn biharmonic_prefactor() -> f64 {
    4.0 / (3f64.powf(0.25) * 2f64.sqrt())
}

/// `3^(3/4) / 4`.
pub fn biharmonic_critical_constant() -> f64 {
    3f64.powf(0.75) / 4.0
}

/// Upper bound for the biharmonic half-line Neumann constant; reference only.
pub const HALFLINE_NEUMANN_UPPER_BOUND: f64 = 2.129;

/// Classical (Weyl) constant
/// `Γ(γ+1)Γ(κ+1) / (2^d π^(d/2) Γ(lκ+1) Γ(κ+γ+1))`.
pub fn classical_constant(p: &LtParams) -> Result<f64> {
    let d = p.d as f64;
    let num = gamma_fn(p.gamma + 1.0)? * gamma_fn(p.kappa + 1.0)?;
    let den = 2f64.powf(d) * PI.powf(d / 2.0) * gamma_fn(p.l * p.kappa + 1.0)? * gamma_fn(p.kappa + p.gamma + 1.0)?;
    Ok(num / den)
}

/// Both closed forms of the ground-state constant at `γ = ν`:
/// `(πκ / sin πκ) L^cl_{l,0,d}` and `L^cl_{l,ν,d} / ν`.
pub fn ground_state_forms(l: f64, d: u32) -> Result<(f64, f64)> {
    let p = LtParams::critical(l, d)?;
    let zero = p.with_gamma(0.0)?;
    let first = PI * p.kappa / (PI * p.kappa).sin() * classical_constant(&zero)?;
    let second = classical_constant(&p)? / p.nu;
    Ok((first, second))
}

/// Ground-state constant `L⁰_{l,ν,d}`; defined for `d < 2l` and `γ = ν`.
pub fn ground_state_constant(p: &LtParams) -> Result<f64> {
    if p.nu <= 0.0 {
        return domain(format!(
            "ground-state constant undefined for d >= 2l (l = {}, d = {})",
            p.l, p.d
        ));
    }
    if !p.is_critical() {
        return domain(format!(
            "ground-state constant is only available at gamma = nu = {} (got {})",
            p.nu, p.gamma
        ));
    }
    Ok(ground_state_forms(p.l, p.d)?.0)
}

/// `1 / (2l sin(π/(2l)))`, the d = 1 ground-state constant.
pub fn ground_state_constant_1d(l: f64) -> f64 {
    1.0 / (2.0 * l * (PI / (2.0 * l)).sin())
}

/// Solves `(l-1) + l z - z^l = 0` on the bracket `[1, l+1]`.
pub fn polyharmonic_constants(l: u32) -> Result<PolyharmonicConstants> {
    if l < 2 {
        return domain(format!("polyharmonic constants need l >= 2, got {l}"));
    }
    let lf = l as f64;
    let f = |z: f64| (lf - 1.0) + lf * z - z.powi(l as i32);
    let df = |z: f64| lf - lf * z.powi(l as i32 - 1);
    let root = bisect_newton(f, df, 1.0, lf + 1.0, 1e-8, 1e-15)?;
    let zeta = root.x;
    let c_tilde = zeta.powi(l as i32 - 1) / lf;
    Ok(PolyharmonicConstants {
        l,
        zeta,
        c_tilde,
        c_l: 0.5 * c_tilde,
        iterations: root.iterations,
    })
}

fn require(cond: bool, theorem: Theorem, what: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        domain(format!("{} requires {what}", theorem.name()))
    }
}

/// Multiplicative constant of the selected upper bound at `p`.
pub fn riesz_bound_constant(p: &LtParams, theorem: Theorem) -> Result<f64> {
    let int_l = p.integer_order();
    let gamma_at_least = |g: f64| p.gamma >= g - PARAM_TOL;
    match theorem {
        Theorem::BiharmonicCritical => {
            require(int_l == Some(2) && p.d == 1, theorem, "l = 2, d = 1")?;
            require(p.is_critical(), theorem, "gamma = 3/4")?;
            Ok(biharmonic_critical_constant())
        }
        Theorem::BiharmonicRiesz => {
            require(int_l == Some(2) && p.d == 1, theorem, "l = 2, d = 1")?;
            require(gamma_at_least(0.75), theorem, "gamma >= 3/4")?;
            Ok(biharmonic_prefactor() * classical_constant(p)?)
        }
        Theorem::PolyharmonicCritical => {
            require(matches!(int_l, Some(l) if l >= 2) && p.d == 1, theorem, "integer l >= 2, d = 1")?;
            require(p.is_critical(), theorem, "gamma = 1 - 1/(2l)")?;
            Ok(polyharmonic_constants(int_l.unwrap_or(2))?.c_l)
        }
        Theorem::PolyharmonicRiesz => {
            require(matches!(int_l, Some(l) if l >= 2) && p.d == 1, theorem, "integer l >= 2, d = 1")?;
            require(gamma_at_least(p.nu), theorem, "gamma >= 1 - 1/(2l)")?;
            let l = int_l.unwrap_or(2);
            let crit = LtParams::critical(p.l, 1)?;
            Ok(polyharmonic_constants(l)?.c_l / classical_constant(&crit)? * classical_constant(p)?)
        }
        Theorem::Lifted => {
            require(matches!(int_l, Some(l) if l >= 2), theorem, "integer l >= 2")?;
            let nu1 = 1.0 - 1.0 / (2.0 * p.l);
            require(gamma_at_least(nu1), theorem, "gamma >= 1 - 1/(2l)")?;
            let l = int_l.unwrap_or(2);
            let crit = LtParams::critical(p.l, 1)?;
            let ratio = polyharmonic_constants(l)?.c_l / classical_constant(&crit)?;
            Ok(ratio.powi(p.d as i32) * semiclassical_constant(p)?)
        }
        Theorem::LiftedBiharmonic => {
            require(int_l == Some(2), theorem, "l = 2")?;
            require(gamma_at_least(0.75), theorem, "gamma >= 3/4")?;
            Ok(biharmonic_prefactor().powi(p.d as i32) * semiclassical_constant(p)?)
        }
        Theorem::SystemSchrodinger => {
            require(int_l == Some(1) && p.d == 1, theorem, "l = 1, d = 1")?;
            require(gamma_at_least(0.5), theorem, "gamma >= 1/2")?;
            Ok(2.0 * classical_constant(p)?)
        }
    }
}

/// One-dimensional phase-space constant `B(γ+1, 1/(2l)) / (2πl)`.
fn semiclassical_base(l: f64, gamma: f64) -> Result<f64> {
    Ok(beta_fn(gamma + 1.0, 1.0 / (2.0 * l))? / (2.0 * PI * l))
}

/// Phase-space constant `C_{l,γ,d}` of the separable symbol `Σ ξ_j^(2l)`,
/// built by the dimension recursion `C_{l,γ,d} = C_{l,γ+1/(2l),d-1} C_{l,γ,1}`.
pub fn semiclassical_constant(p: &LtParams) -> Result<f64> {
    let mut value = 1.0;
    let mut gamma = p.gamma;
    for _ in 0..p.d {
        value *= semiclassical_base(p.l, gamma)?;
        gamma += 1.0 / (2.0 * p.l);
    }
    Ok(value)
}

/// The alternative closed-form expression
/// `B(γ+1, d/(2l)) (2π^((d-1)/2) Γ(1/(2l)) / Γ((ld+1-l)/(2l)))^d / (2 (2πl)^d)`.
///
/// It agrees with the recursion at d = 1 only; see [`SemiclassicalComparison`].
pub fn semiclassical_display_constant(p: &LtParams) -> Result<f64> {
    let (l, d) = (p.l, p.d as f64);
    let inner = 2.0 * PI.powf((d - 1.0) / 2.0) * gamma_fn(1.0 / (2.0 * l))?
        / gamma_fn((l * d + 1.0 - l) / (2.0 * l))?;
    Ok(beta_fn(p.gamma + 1.0, d / (2.0 * l))? * inner.powf(d) / (2.0 * (2.0 * PI * l).powf(d)))
}

/// Recursion value next to the closed-form display, with their ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SemiclassicalComparison {
    pub recursion: f64,
    pub display: f64,
    /// `display / recursion`
    pub ratio: f64,
    /// True when the two differ by more than `1e-10` relative.
    pub discrepancy: bool,
}

pub fn compare_semiclassical_forms(p: &LtParams) -> Result<SemiclassicalComparison> {
    let recursion = semiclassical_constant(p)?;
    let display = semiclassical_display_constant(p)?;
    let ratio = display / recursion;
    Ok(SemiclassicalComparison {
        recursion,
        display,
        ratio,
        discrepancy: (ratio - 1.0).abs() > 1e-10,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(l: f64, g: f64, d: u32) -> LtParams {
        LtParams::new(l, g, d).unwrap()
    }

    #[test]
    fn params_invariants() {
        let p = params(2.0, 0.75, 1);
        assert_eq!(p.kappa + p.nu, 1.0);
        assert!(LtParams::new(0.5, 1.0, 1).is_err());
        assert!(LtParams::new(1.0, -0.1, 1).is_err());
        assert!(LtParams::new(1.0, 1.0, 0).is_err());
        assert!(LtParams::critical(1.0, 2).is_err());
    }

    #[test]
    fn classical_constant_values() {
        assert!((classical_constant(&params(1.0, 1.5, 1)).unwrap() - 3.0 / 16.0).abs() < 1e-14);
        assert!((classical_constant(&params(2.0, 0.75, 1)).unwrap() - 3.0 * 2f64.sqrt() / 16.0).abs() < 1e-14);
        assert!((classical_constant(&params(1.0, 0.5, 1)).unwrap() - 0.25).abs() < 1e-14);
        assert!((classical_constant(&params(1.0, 1.0, 2)).unwrap() - 1.0 / (8.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn ground_state_values() {
        let p = LtParams::critical(1.0, 1).unwrap();
        assert!((ground_state_constant(&p).unwrap() - 0.5).abs() < 1e-14);
        let p = LtParams::critical(2.0, 1).unwrap();
        assert!((ground_state_constant(&p).unwrap() - 1.0 / (2.0 * 2f64.sqrt())).abs() < 1e-14);
        for l in 1..=6 {
            let (a, b) = ground_state_forms(l as f64, 1).unwrap();
            assert!((a - b).abs() < 1e-12);
            assert!((a - ground_state_constant_1d(l as f64)).abs() < 1e-13);
        }
        let (a, b) = ground_state_forms(3.0, 2).unwrap();
        assert!((a - b).abs() < 1e-12);
    }

    #[test]
    fn ground_state_domain_errors() {
        assert!(ground_state_constant(&params(1.0, 0.0, 2)).is_err());
        assert!(ground_state_constant(&params(2.0, 1.0, 1)).is_err());
    }

    #[test]
    fn zeta_values() {
        let c2 = polyharmonic_constants(2).unwrap();
        assert!((c2.zeta - (1.0 + 2f64.sqrt())).abs() < 1e-14);
        assert!((c2.c_l - (1.0 + 2f64.sqrt()) / 4.0).abs() < 1e-14);
        assert!((c2.c_tilde - 2.0 * c2.c_l).abs() < 1e-15);
        let c3 = polyharmonic_constants(3).unwrap();
        assert!((c3.zeta - 2.0).abs() < 1e-14);
        assert!((c3.c_l - 2.0 / 3.0).abs() < 1e-14);
        for l in 2..=12u32 {
            let c = polyharmonic_constants(l).unwrap();
            let lf = l as f64;
            let resid = (lf - 1.0) + lf * c.zeta - c.zeta.powi(l as i32);
            assert!(resid.abs() < 1e-12 * c.zeta.powi(l as i32), "l = {l}");
        }
        assert!(polyharmonic_constants(1).is_err());
    }

    #[test]
    fn bound_constants() {
        let p = LtParams::critical(2.0, 1).unwrap();
        let t11 = riesz_bound_constant(&p, Theorem::BiharmonicCritical).unwrap();
        assert!((t11 - 0.569_876_8).abs() < 1e-7);
        let c14 = riesz_bound_constant(&p, Theorem::BiharmonicRiesz).unwrap();
        assert!((c14 - t11).abs() < 1e-12);
        assert_eq!(format!("{:.4}", biharmonic_prefactor()), "2.1491");
        let c2 = riesz_bound_constant(&p, Theorem::PolyharmonicCritical).unwrap();
        assert!(c2 > t11);
        let c16 = riesz_bound_constant(&p, Theorem::PolyharmonicRiesz).unwrap();
        assert!((c16 - c2).abs() < 1e-14);
    }

    #[test]
    fn bound_constant_hypotheses_are_checked() {
        let p = params(2.0, 0.5, 1);
        let err = riesz_bound_constant(&p, Theorem::BiharmonicRiesz).unwrap_err();
        assert!(err.to_string().contains("gamma >= 3/4"));
        assert!(riesz_bound_constant(&params(3.0, 0.75, 1), Theorem::BiharmonicCritical).is_err());
        assert!(riesz_bound_constant(&params(2.0, 1.0, 1), Theorem::PolyharmonicCritical).is_err());
        assert!(riesz_bound_constant(&params(1.0, 0.4, 1), Theorem::SystemSchrodinger).is_err());
        assert!(riesz_bound_constant(&params(2.5, 1.0, 1), Theorem::Lifted).is_err());
    }

    #[test]
    fn semiclassical_matches_classical_in_one_dimension() {
        for &l in &[1.0, 2.0, 3.0, 1.5] {
            for &g in &[0.0, 0.5, 0.75, 1.0, 2.5] {
                let p = params(l, g, 1);
                let a = semiclassical_constant(&p).unwrap();
                let b = classical_constant(&p).unwrap();
                assert!((a - b).abs() < 1e-12 * b, "l = {l}, gamma = {g}");
            }
        }
        let p = params(1.0, 1.0, 2);
        assert!((semiclassical_constant(&p).unwrap() - 1.0 / (8.0 * PI)).abs() < 1e-15);
    }

    #[test]
    fn display_form_agrees_only_in_one_dimension() {
        let c = compare_semiclassical_forms(&params(2.0, 1.0, 1)).unwrap();
        assert!(!c.discrepancy);
        let c = compare_semiclassical_forms(&params(1.0, 1.0, 2)).unwrap();
        assert!(c.discrepancy);
        // at l = 1, d = 2 the display evaluates to 1/(2(γ+1)) while the
        // recursion gives 1/(8π)
        assert!((c.display - 0.25).abs() < 1e-14);
        assert!((c.ratio - 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn lifted_bounds_reduce_in_one_dimension() {
        let p = params(2.0, 1.5, 1);
        let lifted = riesz_bound_constant(&p, Theorem::Lifted).unwrap();
        let poly = riesz_bound_constant(&p, Theorem::PolyharmonicRiesz).unwrap();
        assert!((lifted - poly).abs() < 1e-13);
        let lb = riesz_bound_constant(&p, Theorem::LiftedBiharmonic).unwrap();
        let br = riesz_bound_constant(&p, Theorem::BiharmonicRiesz).unwrap();
        assert!((lb - br).abs() < 1e-13);
    }

    #[test]
    fn theorem_names_round_trip() {
        for t in Theorem::ALL {
            assert_eq!(Theorem::from_name(t.name()), Some(t));
        }
    }
}
