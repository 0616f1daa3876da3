//! Inequalities between volume, injectivity radius, the Thurston norm and the
//! harmonic norm of a cohomology class.
//!
//! Results that can be contradicted by inconsistent input carry a flag rather
//! than failing, since the engine also runs on model data.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{domain, Result};
use crate::specfun;

/// Margulis number valid for closed hyperbolic 3-manifolds with `b₁ > 0`.
pub const MARGULIS_MU: f64 = 0.29;
/// Margulis number valid for all closed hyperbolic 3-manifolds.
pub const MEYERHOFF_MU: f64 = 0.1;

/// Relative slack used by the sandwich consistency gate.
pub const SANDWICH_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormDatum {
    pub vol: f64,
    pub inj: f64,
    pub thurston: f64,
    pub harmonic: Option<f64>,
}

impl NormDatum {
    pub fn new(vol: f64, inj: f64, thurston: f64, harmonic: Option<f64>) -> Result<Self> {
        let d = Self {
            vol,
            inj,
            thurston,
            harmonic,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.vol > 0.0 && self.vol.is_finite()) {
            return Err(domain("NormDatum", format!("volume must be positive, got {}", self.vol)));
        }
        if !(self.inj > 0.0 && self.inj.is_finite()) {
            return Err(domain("NormDatum", format!("injectivity radius must be positive, got {}", self.inj)));
        }
        if !(self.thurston >= 0.0 && self.thurston.is_finite()) {
            return Err(domain("NormDatum", format!("Thurston norm must be nonnegative, got {}", self.thurston)));
        }
        if let Some(h) = self.harmonic {
            if !(h >= 0.0 && h.is_finite()) {
                return Err(domain("NormDatum", format!("harmonic norm must be nonnegative, got {h}")));
            }
        }
        Ok(())
    }

    /// Where the harmonic value sits relative to [`thm_main_bounds`], if present.
    pub fn sandwich(&self) -> Option<Sandwich> {
        self.harmonic.map(|h| sandwich_value(self, h))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Bounds {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MainBounds {
    pub lower: f64,
    pub upper: f64,
    /// `lower > upper`: the datum cannot come from a hyperbolic manifold.
    pub inconsistent: bool,
}

/// `π‖φ‖_Th / √vol ≤ ‖φ‖_{L²} ≤ 10π‖φ‖_Th / √inj`.
pub fn thm_main_bounds(d: &NormDatum) -> Result<MainBounds> {
    d.validate()?;
    let lower = PI * d.thurston / d.vol.sqrt();
    let upper = 10.0 * PI * d.thurston / d.inj.sqrt();
    Ok(MainBounds {
        lower,
        upper,
        inconsistent: lower > upper,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sandwich {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
    pub lower_ok: bool,
    pub upper_ok: bool,
}

impl Sandwich {
    pub fn holds(&self) -> bool {
        self.lower_ok && self.upper_ok
    }
}

/// Positions `value` (a harmonic norm or a lower bound for one) against the
/// two-sided bound for `d`.
pub fn sandwich_value(d: &NormDatum, value: f64) -> Sandwich {
    let lower = PI * d.thurston / d.vol.sqrt();
    let upper = 10.0 * PI * d.thurston / d.inj.sqrt();
    Sandwich {
        value,
        lower,
        upper,
        lower_ok: value >= lower * (1.0 - SANDWICH_TOL),
        upper_ok: value <= upper * (1.0 + SANDWICH_TOL),
    }
}

/// `C₁‖φ‖_Th / vol ≤ ‖φ‖_{L²} ≤ C₂‖φ‖_Th` for caller-supplied constants.
pub fn bsv_bounds(d: &NormDatum, c1: f64, c2: f64) -> Result<Bounds> {
    d.validate()?;
    if !(c1 > 0.0 && c2 > 0.0) {
        return Err(domain("bsv_bounds", "constants must be positive"));
    }
    Ok(Bounds {
        lower: c1 * d.thurston / d.vol,
        upper: c2 * d.thurston,
    })
}

/// Constants `(C₁, C₂) = (π√vol, 10π/√inj)` under which [`bsv_bounds`]
/// reproduces [`thm_main_bounds`] for this datum.
pub fn bsv_witness(d: &NormDatum) -> (f64, f64) {
    (PI * d.vol.sqrt(), 10.0 * PI / d.inj.sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SupnormBranch {
    /// `inj ≥ μ/2`: a single embedded ball of radius `inj`.
    Thick,
    /// `inj < μ/2`: a ball of radius `μ/2` covering at most `μ/inj` sheets.
    Thin,
    /// No Margulis number applies.
    Vacuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupnormFactor {
    pub value: f64,
    pub branch: SupnormBranch,
    pub mu: f64,
}

/// Constant `K` with `‖α‖_∞ ≤ K ‖α‖_{L²}` for harmonic 1-forms, using
/// `μ = 0.29`. Without `b₁ > 0` that Margulis number is unavailable and the
/// result is flagged vacuous; [`supnorm_factor_with_mu`] with
/// [`MEYERHOFF_MU`] is the fallback.
pub fn supnorm_factor(inj: f64, b1_positive: bool) -> Result<SupnormFactor> {
    if !b1_positive {
        check_inj(inj)?;
        return Ok(SupnormFactor {
            value: 0.0,
            branch: SupnormBranch::Vacuous,
            mu: MARGULIS_MU,
        });
    }
    supnorm_factor_with_mu(inj, MARGULIS_MU)
}

/// `1/√ν(inj)` when `inj ≥ μ/2`, else `√(μ/ν(μ/2)) / √inj`.
pub fn supnorm_factor_with_mu(inj: f64, mu: f64) -> Result<SupnormFactor> {
    check_inj(inj)?;
    if !(mu > 0.0 && mu.is_finite()) {
        return Err(domain("supnorm_factor", format!("Margulis number must be positive, got {mu}")));
    }
    let half = 0.5 * mu;
    Ok(if inj >= half {
        SupnormFactor {
            value: 1.0 / specfun::nu(inj)?.sqrt(),
            branch: SupnormBranch::Thick,
            mu,
        }
    } else {
        SupnormFactor {
            value: (mu / specfun::nu(half)?).sqrt() / inj.sqrt(),
            branch: SupnormBranch::Thin,
            mu,
        }
    })
}

fn check_inj(inj: f64) -> Result<()> {
    if inj > 0.0 && inj.is_finite() {
        Ok(())
    } else {
        Err(domain("supnorm_factor", format!("injectivity radius must be positive, got {inj}")))
    }
}

/// Maximum number of lifts of a point in a ball of radius `μ/2`: `μ/ε` with
/// `ε = min(inj, μ/2)`.
pub fn degree_bound(mu: f64, inj: f64) -> Result<f64> {
    if !(mu > 0.0 && inj > 0.0) {
        return Err(domain("degree_bound", "mu and inj must be positive"));
    }
    Ok(mu / inj.min(0.5 * mu))
}

/// `π‖φ‖_Th ≤ ‖φ‖_A ≤ 2π‖φ‖_Th` for the least-area norm.
pub fn area_norm_bounds(thurston: f64) -> Result<Bounds> {
    if !(thurston >= 0.0) {
        return Err(domain("area_norm_bounds", format!("Thurston norm must be nonnegative, got {thurston}")));
    }
    Ok(Bounds {
        lower: PI * thurston,
        upper: 2.0 * PI * thurston,
    })
}

/// `2π‖φ‖_Th / (3√vol)`, the hyperbolic-metric specialisation of the
/// scalar-curvature bound.
pub fn km_lower(vol: f64, thurston: f64) -> Result<f64> {
    if !(vol > 0.0) || !(thurston >= 0.0) {
        return Err(domain("km_lower", "need vol > 0 and thurston >= 0"));
    }
    Ok(2.0 * PI * thurston / (3.0 * vol.sqrt()))
}

/// `‖φ‖ ≥ Σ ‖φ|_piece‖` for a manifold cut along incompressible tori.
pub fn split_lower_bound(piece_norms: &[f64]) -> Result<f64> {
    if piece_norms.is_empty() {
        return Err(domain("split_lower_bound", "no pieces"));
    }
    if piece_norms.iter().any(|x| !(*x >= 0.0)) {
        return Err(domain("split_lower_bound", "piece norms must be nonnegative"));
    }
    Ok(piece_norms.iter().sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_datum() {
        let d = NormDatum::new(1.0, 1.0, 1.0, None).unwrap();
        let b = thm_main_bounds(&d).unwrap();
        assert_eq!((b.lower, b.upper), (PI, 10.0 * PI));
        assert!(!b.inconsistent);
    }

    #[test]
    fn huge_injectivity_is_flagged() {
        let d = NormDatum::new(1.0, 1000.0, 1.0, None).unwrap();
        assert!(thm_main_bounds(&d).unwrap().inconsistent);
    }

    #[test]
    fn bsv_examples() {
        let d = NormDatum::new(4.0, 1.0, 2.0, None).unwrap();
        assert_eq!(bsv_bounds(&d, 1.0, 1.0).unwrap(), Bounds { lower: 0.5, upper: 2.0 });
        let z = NormDatum::new(4.0, 1.0, 0.0, None).unwrap();
        assert_eq!(bsv_bounds(&z, 1.0, 1.0).unwrap(), Bounds { lower: 0.0, upper: 0.0 });
    }

    #[test]
    fn degree_examples() {
        assert_eq!(degree_bound(0.29, 0.2).unwrap(), 2.0);
        assert!((degree_bound(0.29, 0.029).unwrap() - 10.0).abs() < 1e-12);
    }

    #[test]
    fn area_and_split() {
        assert_eq!(area_norm_bounds(1.0).unwrap(), Bounds { lower: PI, upper: 2.0 * PI });
        assert_eq!(area_norm_bounds(0.0).unwrap(), Bounds { lower: 0.0, upper: 0.0 });
        assert_eq!(split_lower_bound(&[2.0, 3.0]).unwrap(), 5.0);
        assert!(split_lower_bound(&[]).is_err());
    }

    #[test]
    fn km_examples() {
        assert!((km_lower(1.0, 3.0).unwrap() - 2.0 * PI).abs() < 1e-15);
        assert_eq!(km_lower(2.0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn vacuous_without_first_betti() {
        let f = supnorm_factor(0.5, false).unwrap();
        assert_eq!((f.value, f.branch), (0.0, SupnormBranch::Vacuous));
        let m = supnorm_factor_with_mu(0.01, MEYERHOFF_MU).unwrap();
        assert_eq!(m.branch, SupnormBranch::Thin);
    }
}
