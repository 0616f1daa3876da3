//! Radial harmonic functions on hyperbolic 3-space.
//!
//! In geodesic polar coordinates about a point, every harmonic function is a
//! sum of `ψ_ℓ(r) Y_ℓm(φ, θ)` with
//!
//! ```text
//! ψ_ℓ(r) = Γ(3/2) Γ(ℓ+2) / Γ(ℓ+3/2) · tanh^ℓ(r/2) · ₂F₁(−1/2, ℓ; ℓ+3/2; tanh²(r/2))
//! ```
//!
//! normalised so that `ψ_ℓ(r) → 1` as `r → ∞`. For ℓ = 1 there is the closed
//! form `ψ₁(r) = coth r − r csch² r`. Writing `A(r) = r coth r − 1`, one has
//! `ψ₁ = A′`, `ψ₁′ = A″ = 2A / sinh² r`, and the sharp gradient constant
//!
//! ```text
//! ν(r) = 3π ∫₀ʳ (ψ₁′² sinh² ρ + 2ψ₁²) dρ = 6π A(r) ψ₁(r)
//! ```
//!
//! where the closed form follows from Green's identity
//! `∫_B |dΨ|² = ∫_∂B Ψ ∂ᵣΨ` for the harmonic `Ψ = ψ₁ Y₁₀`. Both the quadrature
//! and the closed form are exposed and cross-checked in tests.
//!
//! Near the origin `coth` and `csch²` cancel catastrophically, so `A` and its
//! derivatives are evaluated from their Bernoulli series below `r = 1`.
//!
//! Note on the ℓ = 1 reduction: `₂F₁(1/2, 1; 3/2; x²) = Σ x²ⁿ/(2n+1) = artanh(x)/x`.
//! The variant `artanh(x²)/x` that appears in some derivations is a misprint
//! and is not used here.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::hypergeom;
use crate::quad::{self, QuadTol};

/// Which evaluation route a [`RadialMode`] uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalPath {
    Series,
    ClosedForm,
}

/// A radial mode `ψ_ℓ` bound to an evaluation route. The closed form exists
/// only for ℓ ∈ {0, 1}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RadialMode {
    ell: u32,
    path: EvalPath,
}

impl RadialMode {
    pub fn new(ell: u32, path: EvalPath) -> Result<Self> {
        if path == EvalPath::ClosedForm && ell > 1 {
            return Err(domain(
                "RadialMode::new",
                format!("no closed form for ell = {ell}"),
            ));
        }
        Ok(Self { ell, path })
    }

    pub fn series(ell: u32) -> Self {
        Self {
            ell,
            path: EvalPath::Series,
        }
    }

    pub fn ell(&self) -> u32 {
        self.ell
    }

    pub fn path(&self) -> EvalPath {
        self.path
    }

    pub fn value(&self, r: f64) -> Result<f64> {
        check_radius("psi", r)?;
        Ok(match (self.path, self.ell) {
            (_, 0) => 1.0,
            (EvalPath::ClosedForm, _) => psi1_closed(r),
            (EvalPath::Series, ell) => psi_series(ell, r),
        })
    }

    pub fn derivative(&self, r: f64) -> Result<f64> {
        check_radius("dpsi", r)?;
        Ok(match (self.path, self.ell) {
            (_, 0) => 0.0,
            (EvalPath::ClosedForm, _) => dpsi1_closed(r),
            (EvalPath::Series, ell) => dpsi_series(ell, r),
        })
    }
}

fn check_radius(op: &'static str, r: f64) -> Result<()> {
    if r.is_nan() || r < 0.0 {
        Err(domain(op, format!("radius must be nonnegative, got {r}")))
    } else {
        Ok(())
    }
}

/// `ψ_ℓ(r)` through the hypergeometric representation.
pub fn psi(ell: u32, r: f64) -> Result<f64> {
    RadialMode::series(ell).value(r)
}

/// `∂ψ_ℓ/∂r` through the hypergeometric representation.
pub fn dpsi(ell: u32, r: f64) -> Result<f64> {
    RadialMode::series(ell).derivative(r)
}

/// Γ(3/2)Γ(ℓ+2)/Γ(ℓ+3/2), built by the ratio recurrence.
fn prefactor(ell: u32) -> f64 {
    (1..=ell).fold(1.0, |k, l| {
        let l = f64::from(l);
        k * (l + 1.0) / (l + 0.5)
    })
}

/// `(tanh(r/2), tanh²(r/2), sech²(r/2))`.
fn half_angle(r: f64) -> (f64, f64, f64) {
    let t = (0.5 * r).tanh();
    let c = (0.5 * r).cosh();
    (t, t * t, 1.0 / (c * c))
}

pub(crate) fn psi_series(ell: u32, r: f64) -> f64 {
    if ell == 0 {
        return 1.0;
    }
    let (t, z, omz) = half_angle(r);
    let f = hypergeom::eval_integer_gap(-0.5, f64::from(ell), 2, z, omz);
    prefactor(ell) * t.powi(ell as i32) * f
}

pub(crate) fn dpsi_series(ell: u32, r: f64) -> f64 {
    if ell == 0 {
        return 0.0;
    }
    let l = f64::from(ell);
    let (t, z, omz) = half_angle(r);
    let f = hypergeom::eval_integer_gap(-0.5, l, 2, z, omz);
    // d/dz ₂F₁(a, b; c; z) = (ab/c) ₂F₁(a+1, b+1; c+1; z)
    let fp = -l / (2.0 * l + 3.0) * hypergeom::eval_integer_gap(0.5, l + 1.0, 1, z, omz);
    let dt_dr = 0.5 * omz;
    prefactor(ell) * dt_dr * (l * t.powi(ell as i32 - 1) * f + 2.0 * t.powi(ell as i32 + 1) * fp)
}

/// Taylor coefficients of `A(r) = r coth r − 1 = Σ_{k≥1} A_COEF[k−1] r^{2k}`,
/// namely `2^{2k} B_{2k} / (2k)!`.
const A_COEF: [f64; 20] = [
    0.333_333_333_333_333_3,
    -0.022_222_222_222_222_223,
    0.002_116_402_116_402_116_5,
    -0.000_211_640_211_640_211_65,
    2.137_779_915_557_693_5e-5,
    -2.164_404_280_806_397_2e-6,
    2.192_594_785_187_377_8e-7,
    -2.221_460_878_997_967_8e-8,
    2.250_784_651_680_899_4e-9,
    -2.280_515_120_459_218_3e-10,
    2.310_643_259_900_262_4e-11,
    -2.341_170_681_982_488_2e-12,
    2.372_101_740_023_365_3e-13,
    -2.403_441_533_330_770_5e-14,
    2.435_195_402_918_336_7e-15,
    -2.467_368_804_517_207_5e-16,
    2.499_967_277_122_081e-17,
    -2.532_996_435_740_635e-18,
    2.566_461_970_282_629e-19,
    -2.600_369_646_013_727_4e-20,
];

/// Below this radius `A` and its derivatives come from the series.
const SERIES_SWITCH: f64 = 1.0;

/// `(A, A′, A″)` at `r` from the Bernoulli series.
fn a_series(r: f64) -> (f64, f64, f64) {
    let r2 = r * r;
    let (mut a, mut a1, mut a2) = (0.0, 0.0, 0.0);
    // Horner from the top coefficient down.
    for (i, &c) in A_COEF.iter().enumerate().rev() {
        let k = (i + 1) as f64;
        a = a * r2 + c;
        a1 = a1 * r2 + 2.0 * k * c;
        a2 = a2 * r2 + 2.0 * k * (2.0 * k - 1.0) * c;
    }
    (a * r2, a1 * r, a2)
}

/// `A(r) = r coth r − 1`.
fn a_fn(r: f64) -> f64 {
    if r < SERIES_SWITCH {
        a_series(r).0
    } else {
        r / r.tanh() - 1.0
    }
}

/// `ψ₁(r) = coth r − r csch² r`.
pub fn psi1_closed(r: f64) -> f64 {
    if r < SERIES_SWITCH {
        a_series(r).1
    } else {
        let s = r.sinh();
        1.0 / r.tanh() - r / (s * s)
    }
}

/// `ψ₁′(r) = 2 (r coth r − 1) / sinh² r`, with limit 2/3 at the origin.
pub fn dpsi1_closed(r: f64) -> f64 {
    if r < SERIES_SWITCH {
        a_series(r).2
    } else {
        let s = r.sinh();
        2.0 * (r / r.tanh() - 1.0) / (s * s)
    }
}

/// Integrand of [`mode_norm`]: `ψ_ℓ′(ρ)² sinh² ρ + ℓ(ℓ+1) ψ_ℓ(ρ)²`.
pub fn mode_norm_integrand(ell: u32, rho: f64) -> f64 {
    let l = f64::from(ell);
    let radial = dpsi_series(ell, rho) * rho.sinh();
    let angular = psi_series(ell, rho);
    radial * radial + l * (l + 1.0) * angular * angular
}

/// `N_ℓ(r)`: the squared L²(B_r) norm of `d(ψ_ℓ Y_ℓm)` for a unit-normalised
/// spherical harmonic, by adaptive quadrature.
pub fn mode_norm(ell: u32, r: f64) -> Result<f64> {
    if ell == 0 {
        return Err(domain("mode_norm", "the ell = 0 mode has zero differential"));
    }
    if r.is_nan() || r <= 0.0 {
        return Err(domain("mode_norm", format!("radius must be positive, got {r}")));
    }
    Ok(quad::adaptive(|rho| mode_norm_integrand(ell, rho), 0.0, r, QuadTol::default())?.value)
}

/// Below this radius the ν-integrand is evaluated from its Taylor series.
const NU_INTEGRAND_SWITCH: f64 = 0.5;

/// The ν-integrand divided by 6π:
///
/// ```text
/// coth²ρ + 2csch²ρ − 6ρ cothρ csch²ρ + ρ² csch²ρ (2coth²ρ + csch²ρ)
/// ```
///
/// which equals `A′² + A A″ = d(A A′)/dρ`. The literal expression loses about
/// `4 log₁₀(1/ρ)` digits to cancellation, so small ρ uses the series.
pub fn nu_integrand(rho: f64) -> f64 {
    if rho < NU_INTEGRAND_SWITCH {
        let (a, a1, a2) = a_series(rho);
        a1 * a1 + a * a2
    } else {
        let coth = 1.0 / rho.tanh();
        let s = rho.sinh();
        let csch2 = 1.0 / (s * s);
        coth * coth + 2.0 * csch2 - 6.0 * rho * coth * csch2
            + rho * rho * csch2 * (2.0 * coth * coth + csch2)
    }
}

/// `ν(r) = 6π ∫₀ʳ nu_integrand`, by adaptive quadrature.
pub fn nu(r: f64) -> Result<f64> {
    check_radius("nu", r)?;
    Ok(6.0 * PI * quad::adaptive(nu_integrand, 0.0, r, QuadTol::default())?.value)
}

/// `ν(r) = 6π (r coth r − 1)(coth r − r csch² r)`.
pub fn nu_closed_form(r: f64) -> Result<f64> {
    check_radius("nu_closed_form", r)?;
    Ok(6.0 * PI * a_fn(r) * psi1_closed(r))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs()
    }

    #[test]
    fn psi_zero_is_constant() {
        assert_eq!(psi(0, 2.7).unwrap(), 1.0);
        assert_eq!(dpsi(0, 0.4).unwrap(), 0.0);
        assert_eq!(dpsi(0, 13.0).unwrap(), 0.0);
    }

    #[test]
    fn psi_vanishes_at_origin() {
        for ell in 1..6 {
            assert_eq!(psi(ell, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn psi_one_series_matches_closed_form_at_one() {
        let s = psi(1, 1.0).unwrap();
        let c = 1.0 / 1f64.tanh() - 1.0 / 1f64.sinh().powi(2);
        assert!(rel(s, c) < 1e-10);
    }

    #[test]
    fn psi_one_small_argument() {
        let v = psi(1, 1e-4).unwrap();
        assert!(rel(v, 2.0 / 3.0 * 1e-4) < 1e-6);
        let v = RadialMode::new(1, EvalPath::ClosedForm).unwrap().value(1e-4).unwrap();
        assert!(rel(v, 2.0 / 3.0 * 1e-4) < 1e-6);
    }

    #[test]
    fn dpsi_one_limit_and_finite_difference() {
        assert!((dpsi(1, 0.0).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((dpsi1_closed(0.0) - 2.0 / 3.0).abs() < 1e-15);
        let h = 1e-5;
        let fd = (psi(1, 1.5 + h).unwrap() - psi(1, 1.5 - h).unwrap()) / (2.0 * h);
        assert!(rel(dpsi(1, 1.5).unwrap(), fd) < 1e-6);
    }

    #[test]
    fn negative_radius_is_rejected() {
        assert!(psi(1, -0.1).is_err());
        assert!(dpsi(2, -1.0).is_err());
        assert!(nu(-1e-9).is_err());
        assert!(psi(1, f64::NAN).is_err());
    }

    #[test]
    fn closed_form_only_for_low_modes() {
        assert!(RadialMode::new(2, EvalPath::ClosedForm).is_err());
        assert!(RadialMode::new(1, EvalPath::ClosedForm).is_ok());
    }

    #[test]
    fn mode_norm_rejects_constant_mode() {
        assert!(mode_norm(0, 1.0).is_err());
        assert!(mode_norm(1, 0.0).is_err());
    }

    #[test]
    fn series_and_closed_paths_agree_on_log_grid() {
        let closed = RadialMode::new(1, EvalPath::ClosedForm).unwrap();
        let series = RadialMode::series(1);
        for i in 0..=80 {
            let r = 1e-3 * 10f64.powf(4.0 * i as f64 / 80.0);
            let (a, b) = (series.value(r).unwrap(), closed.value(r).unwrap());
            assert!(rel(a, b) < 1e-10, "psi r={r}: {a} vs {b}");
            let (a, b) = (series.derivative(r).unwrap(), closed.derivative(r).unwrap());
            assert!(rel(a, b) < 1e-10, "dpsi r={r}: {a} vs {b}");
        }
    }

    #[test]
    fn nu_integrand_branches_meet() {
        let below = {
            let (a, a1, a2) = a_series(NU_INTEGRAND_SWITCH);
            a1 * a1 + a * a2
        };
        let above = nu_integrand(NU_INTEGRAND_SWITCH);
        assert!(rel(below, above) < 1e-13);
    }

    #[test]
    fn nu_quadrature_matches_closed_form() {
        for &r in &[1e-3, 0.145, 0.5, 1.0, 2.0, 7.5, 30.0] {
            let q = nu(r).unwrap();
            let c = nu_closed_form(r).unwrap();
            assert!(rel(q, c) < 1e-10, "r={r}: {q} vs {c}");
        }
        assert_eq!(nu(0.0).unwrap(), 0.0);
    }
}
