//! Parametric models of three families of closed hyperbolic 3-manifolds.
//!
//! - Covers: degree-`d` covers of a fixed manifold scale volume and Thurston
//!   norm by `d` and the harmonic norm by `√d`, so the normalised ratio
//!   `‖φ‖_Th / (‖φ‖_{L²} √vol)` is constant.
//! - Dehn fillings: a class on the filled manifold `M_n` with Thurston norm
//!   `n‖α‖ + ‖β‖ − 2`, a core geodesic of length `2c₁/n²` and a tube of depth
//!   `arcsinh(c₂n)`. The tube bound gives `‖φ_n‖_{L²} ≳ n√(log n)`. Volumes
//!   are the limit `vol(W)` rather than the unknown finite-`n` values.
//! - Gluings: `n` copies of a fibered block glued by the monodromy, where the
//!   generator of `H¹` is `Fⁿ(e¹) = a_n e¹ + c_n e³` and the Thurston norm
//!   grows like `λⁿ` while volume grows like `n`.
//!
//! The constants `c₁`, `c₂` and the norm-comparison scale `th_unit` are
//! existence constants with no computed value; they default to 1.

use std::f64::consts::PI;

use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::bounds::{self, NormDatum};
use crate::error::{domain, Result};
use crate::homalg;
use crate::tubefield::{self, TubeChart};

/// Volume of the cusped manifold `W` whose fillings form the family.
pub const VOL_W: f64 = 9.672_807_730_79;
/// Volume of the fibered block `M_f`.
pub const VOL_BLOCK: f64 = 7.517_689_896_47;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverFamilyParams {
    pub base: NormDatum,
    pub degrees: Vec<u64>,
}

impl CoverFamilyParams {
    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.base.harmonic.is_none() {
            return Err(domain("cover_family", "base datum needs a harmonic norm"));
        }
        if self.degrees.first() != Some(&1) {
            return Err(domain("cover_family", "degrees must start at 1"));
        }
        if self.degrees.windows(2).any(|w| w[0] >= w[1]) {
            return Err(domain("cover_family", "degrees must be strictly increasing"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoverRow {
    pub degree: u64,
    pub datum: NormDatum,
    /// `‖φ‖_Th / (‖φ‖_{L²} √vol)`.
    pub ratio: f64,
}

/// `thurston / (harmonic √vol)` for a datum with a harmonic norm.
pub fn normalised_ratio(d: &NormDatum) -> Option<f64> {
    d.harmonic.map(|h| d.thurston / (h * d.vol.sqrt()))
}

/// One datum per degree. The injectivity radius is carried over unchanged as a
/// lower bound.
pub fn cover_family(p: &CoverFamilyParams) -> Result<Vec<CoverRow>> {
    p.validate()?;
    p.degrees
        .iter()
        .map(|&deg| {
            let d = deg as f64;
            let b = &p.base;
            let datum = NormDatum::new(
                b.vol * d,
                b.inj,
                b.thurston * d,
                b.harmonic.map(|h| h * d.sqrt()),
            )?;
            Ok(CoverRow {
                degree: deg,
                datum,
                ratio: normalised_ratio(&datum).unwrap_or(f64::NAN),
            })
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FillingFamilyParams {
    pub th_alpha: f64,
    pub th_beta: f64,
    pub c1: f64,
    pub c2: f64,
    pub vol_w: f64,
}

impl Default for FillingFamilyParams {
    fn default() -> Self {
        Self {
            th_alpha: 1.0,
            th_beta: 1.0,
            c1: 1.0,
            c2: 1.0,
            vol_w: VOL_W,
        }
    }
}

impl FillingFamilyParams {
    pub fn validate(&self) -> Result<()> {
        let all = [self.th_alpha, self.th_beta, self.c1, self.c2, self.vol_w];
        if all.iter().all(|x| *x > 0.0 && x.is_finite()) {
            Ok(())
        } else {
            Err(domain("filling_family", "all parameters must be positive"))
        }
    }

    /// Limit of `ratio(n) / √(log n)`: `√(π/c₁) / ‖α‖_Th`.
    pub fn ratio_growth_constant(&self) -> f64 {
        (PI / self.c1).sqrt() / self.th_alpha
    }

    /// Limit of `harmonic_lower(n) / (n √(log n))`: `√(π/c₁)`.
    pub fn norm_growth_constant(&self) -> f64 {
        (PI / self.c1).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FillingRow {
    pub n: u64,
    pub datum: NormDatum,
    pub core_length: f64,
    pub depth: f64,
    pub harmonic_lower: f64,
    /// `harmonic_lower / thurston`.
    pub ratio: f64,
}

pub fn filling_family(p: &FillingFamilyParams, n: u64) -> Result<FillingRow> {
    p.validate()?;
    let nf = n as f64;
    let thurston = nf * p.th_alpha + p.th_beta - 2.0;
    if !(thurston > 0.0) {
        return Err(domain("filling_family", format!("Thurston norm {thurston} is not positive at n = {n}")));
    }
    let inj = p.c1 / (nf * nf);
    let core_length = 2.0 * inj;
    let depth = (p.c2 * nf).asinh();
    let harmonic_lower = tubefield::tube_lower_bound(&TubeChart::new(core_length, depth, 0.0)?);
    Ok(FillingRow {
        n,
        datum: NormDatum::new(p.vol_w, inj, thurston, None)?,
        core_length,
        depth,
        harmonic_lower,
        ratio: harmonic_lower / thurston,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GluingFamilyParams {
    pub vol_block: f64,
    /// Growth rate of `F̄ⁿ`. The exact entries always come from `F̄`; this
    /// value only enters the reported reference rates.
    pub lambda: f64,
    pub th_unit: f64,
}

impl Default for GluingFamilyParams {
    fn default() -> Self {
        Self {
            vol_block: VOL_BLOCK,
            lambda: homalg::lambda(),
            th_unit: 1.0,
        }
    }
}

impl GluingFamilyParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda > 1.0) {
            return Err(domain("gluing_family", format!("lambda must exceed 1, got {}", self.lambda)));
        }
        if !(self.vol_block > 0.0 && self.th_unit > 0.0) {
            return Err(domain("gluing_family", "vol_block and th_unit must be positive"));
        }
        Ok(())
    }

    /// `ln λ / vol_block`, the limit of `rate_ln`.
    pub fn asymptotic_rate(&self) -> f64 {
        self.lambda.ln() / self.vol_block
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GluingRow {
    pub n: u64,
    pub vol: f64,
    /// Lower bound for `‖φ_n‖_Th` from the splitting inequality; infinite
    /// once it leaves `f64` range.
    pub th_lower: f64,
    pub log_th_lower: f64,
    /// `log_th_lower / vol`.
    pub rate_ln: f64,
    /// `λ / vol_block`.
    pub rate_paper: f64,
}

/// The splitting inequality bounds `‖φ_n‖_Th` below by the norm of the
/// restriction to one block, which is at least `th_unit · (|a_n| + |c_n|)`;
/// the other pieces contribute `≥ 0`.
pub fn gluing_family(p: &GluingFamilyParams, n: u64) -> Result<GluingRow> {
    p.validate()?;
    if n < 1 {
        return Err(domain("gluing_family", "n must be at least 1"));
    }
    let n32 = u32::try_from(n).map_err(|_| domain("gluing_family", "n too large"))?;
    let f = homalg::fbar_power(n32);
    let l1 = f.a.abs() + f.c.abs();
    let log_th_lower = p.th_unit.ln() + homalg::big_ln(&l1)?;
    let piece = p.th_unit * l1.to_f64().unwrap_or(f64::INFINITY);
    let th_lower = bounds::split_lower_bound(&[piece, 0.0])?;
    let vol = n as f64 * p.vol_block;
    Ok(GluingRow {
        n,
        vol,
        th_lower,
        log_th_lower,
        rate_ln: log_th_lower / vol,
        rate_paper: p.lambda / p.vol_block,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit_base() -> NormDatum {
        NormDatum::new(1.0, 0.5, 1.0, Some(1.0)).unwrap()
    }

    #[test]
    fn cover_degree_one_is_base() {
        let rows = cover_family(&CoverFamilyParams {
            base: unit_base(),
            degrees: vec![1, 4],
        })
        .unwrap();
        assert_eq!(rows[0].datum, unit_base());
        let d4 = rows[1].datum;
        assert_eq!((d4.vol, d4.thurston, d4.harmonic), (4.0, 4.0, Some(2.0)));
        assert_eq!(rows[1].ratio, 1.0);
    }

    #[test]
    fn cover_validation() {
        let bad = |degrees: Vec<u64>| CoverFamilyParams { base: unit_base(), degrees };
        assert!(cover_family(&bad(vec![2, 3])).is_err());
        assert!(cover_family(&bad(vec![1, 3, 3])).is_err());
        let mut p = bad(vec![1]);
        p.base.harmonic = None;
        assert!(cover_family(&p).is_err());
    }

    #[test]
    fn filling_first_term_rejected() {
        assert!(filling_family(&FillingFamilyParams::default(), 1).is_err());
        assert!(filling_family(&FillingFamilyParams::default(), 2).is_ok());
    }

    #[test]
    fn filling_injectivity_model() {
        let p = FillingFamilyParams {
            c1: 0.7,
            ..Default::default()
        };
        let row = filling_family(&p, 300).unwrap();
        assert!((row.datum.inj * 300.0 * 300.0 - 0.7).abs() < 1e-12);
    }

    #[test]
    fn gluing_validation() {
        let p = GluingFamilyParams {
            lambda: 1.0,
            ..Default::default()
        };
        assert!(gluing_family(&p, 3).is_err());
        assert!(gluing_family(&GluingFamilyParams::default(), 0).is_err());
    }

    #[test]
    fn gluing_small_n() {
        let row = gluing_family(&GluingFamilyParams::default(), 1).unwrap();
        assert_eq!(row.th_lower, 4.0);
        assert!((row.log_th_lower - 4f64.ln()).abs() < 1e-15);
    }
}
