//! One-dimensional quadrature.
//!
//! [`adaptive`] is a globally adaptive Gauss–Kronrod (7/15 point) integrator.
//! Intervals are bisected in order of decreasing error estimate until the
//! total estimate falls below `max(abs_tol, rel_tol * |I|)`. The error
//! estimate is the raw Kronrod–Gauss difference, which overestimates the true
//! error of the Kronrod value on smooth integrands.
//!
//! [`gauss_legendre`] builds fixed tensor-product rules used by the 3D ball
//! and tube integrators.

use std::collections::BinaryHeap;
use std::num::NonZeroUsize;

use gauss_quad::legendre::GaussLegendre;

use crate::error::{Error, Result};

/// Tolerances used by [`adaptive`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadTol {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl Default for QuadTol {
    fn default() -> Self {
        Self {
            abs: 1e-12,
            rel: 1e-10,
            max_intervals: 4000,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// Gauss weights for the nodes XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn gk15<F: FnMut(f64) -> f64>(f: &mut F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// Integrates `f` over `[a, b]`.
pub fn adaptive<F: FnMut(f64) -> f64>(mut f: F, a: f64, b: f64, tol: QuadTol) -> Result<QuadResult> {
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        });
    }
    let (value, error) = gk15(&mut f, a, b);
    if !value.is_finite() {
        return Err(Error::NonFinite {
            point: format!("[{a}, {b}]"),
            value,
        });
    }
    let mut heap = BinaryHeap::new();
    heap.push(Panel { a, b, value, error });
    let mut total = value;
    let mut total_err = error;
    while total_err > tol.abs.max(tol.rel * total.abs()) {
        if heap.len() >= tol.max_intervals {
            return Err(Error::NoConvergence {
                a,
                b,
                estimate: total,
                error: total_err,
            });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        let (v1, e1) = gk15(&mut f, worst.a, mid);
        let (v2, e2) = gk15(&mut f, mid, worst.b);
        if !(v1.is_finite() && v2.is_finite()) {
            return Err(Error::NonFinite {
                point: format!("[{}, {}]", worst.a, worst.b),
                value: v1 + v2,
            });
        }
        total += v1 + v2 - worst.value;
        total_err += e1 + e2 - worst.error;
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2 });
    }
    // Re-sum to shed accumulated cancellation from the running updates.
    let value = heap.iter().map(|p| p.value).sum();
    let error = heap.iter().map(|p| p.error).sum();
    Ok(QuadResult {
        value,
        error,
        intervals: heap.len(),
    })
}

/// Gauss–Legendre nodes and weights mapped to `[a, b]`, nodes ascending.
pub fn gauss_legendre(order: usize, a: f64, b: f64) -> Result<Vec<(f64, f64)>> {
    let degree = NonZeroUsize::new(order)
        .ok_or_else(|| crate::error::domain("gauss_legendre", "order must be positive"))?;
    let rule = GaussLegendre::new(degree);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut pts: Vec<(f64, f64)> = rule
        .as_node_weight_pairs()
        .iter()
        .map(|&(x, w)| (mid + half * x, half * w))
        .collect();
    pts.sort_by(|p, q| p.0.total_cmp(&q.0));
    Ok(pts)
}

/// Uniform (trapezoid) rule on a full period `[0, period)`: exact for
/// trigonometric polynomials of degree below `order`.
pub fn periodic_uniform(order: usize, period: f64) -> Vec<(f64, f64)> {
    let w = period / order as f64;
    (0..order).map(|k| (k as f64 * w, w)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gk_integrates_smooth_functions() {
        let r = adaptive(|x| x.exp(), 0.0, 1.0, QuadTol::default()).unwrap();
        assert!((r.value - (1f64.exp() - 1.0)).abs() < 1e-14);
        let r = adaptive(|x| 1.0 / (1.0 + x * x), -50.0, 50.0, QuadTol::default()).unwrap();
        assert!((r.value - 2.0 * 50f64.atan()).abs() < 1e-10);
    }

    #[test]
    fn gk_reports_nonconvergence() {
        let tol = QuadTol {
            max_intervals: 3,
            ..QuadTol::default()
        };
        let err = adaptive(|x| (1.0 / x).sin(), 1e-6, 1.0, tol).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { .. }));
    }

    #[test]
    fn gauss_legendre_is_exact_for_polynomials() {
        let pts = gauss_legendre(6, 0.0, 2.0).unwrap();
        let s: f64 = pts.iter().map(|&(x, w)| w * x.powi(11)).sum();
        assert!((s - 2f64.powi(12) / 12.0).abs() < 1e-10);
        assert!(pts.windows(2).all(|p| p[0].0 < p[1].0));
    }

    #[test]
    fn periodic_rule_kills_low_harmonics() {
        let pts = periodic_uniform(8, std::f64::consts::TAU);
        let s: f64 = pts.iter().map(|&(t, w)| w * (3.0 * t).cos()).sum();
        assert!(s.abs() < 1e-14);
    }
}
