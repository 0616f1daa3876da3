//! Margulis tubes in cylindrical coordinates.
//!
//! A tube of depth `R` about a closed geodesic of length `ε` carries the metric
//! `dr² + sinh²r dθ² + cosh²r dz²` with `0 ≤ r ≤ R`, `θ ∈ [0, 2π)`, `z ∈ [0, ε]`,
//! the ends in `z` glued by a rotation through the twist angle `θ₀`. None of
//! the integrals here depend on `θ₀`; it is carried for completeness.
//!
//! The invariant form `dz/ε` is closed and coclosed (`*dz = tanh r dr∧dθ`),
//! has period 1 on the core, and minimises the L² norm among such forms on the
//! tube. Frame components are reported in the orthonormal coframe
//! `{dr, sinh r dθ, cosh r dz}` using the three slots of [`CovectorFrame`].

use std::f64::consts::{LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::ballfield::CovectorFrame;
use crate::error::{domain, Error, Result};
use crate::quad;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TubeChart {
    epsilon: f64,
    depth: f64,
    theta0: f64,
}

impl TubeChart {
    pub fn new(epsilon: f64, depth: f64, theta0: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(domain("TubeChart::new", format!("core length must be positive, got {epsilon}")));
        }
        if !(depth > 0.0 && depth.is_finite()) {
            return Err(domain("TubeChart::new", format!("depth must be positive, got {depth}")));
        }
        if !(0.0..2.0 * PI).contains(&theta0) {
            return Err(domain("TubeChart::new", format!("twist {theta0} out of [0, 2π)")));
        }
        Ok(Self { epsilon, depth, theta0 })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn depth(&self) -> f64 {
        self.depth
    }

    pub fn theta0(&self) -> f64 {
        self.theta0
    }
}

/// `ln cosh x` without overflow for large `x`.
pub(crate) fn ln_cosh(x: f64) -> f64 {
    let x = x.abs();
    x + (-2.0 * x).exp().ln_1p() - LN_2
}

/// `π ε sinh² R`.
pub fn tube_volume(t: &TubeChart) -> f64 {
    PI * t.epsilon * t.depth.sinh().powi(2)
}

/// `‖dz/ε‖_{L²} = √((2π/ε) ln cosh R)`.
pub fn tube_form_norm(t: &TubeChart) -> f64 {
    (2.0 * PI / t.epsilon * ln_cosh(t.depth)).sqrt()
}

/// Lower bound for `‖α|_V‖` over closed and coclosed `α` with unit period on
/// the core. It equals [`tube_form_norm`]; see [`tube_lower_bound_checked`]
/// for the numerical competitor check.
pub fn tube_lower_bound(t: &TubeChart) -> f64 {
    tube_form_norm(t)
}

/// Default nodes per axis for tube quadrature.
pub const DEFAULT_ORDER: usize = 48;

/// Tensor rule over the tube: Gauss–Legendre in `r`, uniform in `θ` and `z`,
/// weights including `√g = sinh r cosh r`.
#[derive(Debug, Clone)]
pub struct TubeQuadrature {
    nodes: Vec<([f64; 3], f64)>,
}

impl TubeQuadrature {
    pub fn new(t: &TubeChart, order: usize) -> Result<Self> {
        if order < 4 {
            return Err(domain("TubeQuadrature::new", format!("order {order} below 4")));
        }
        let rs = quad::gauss_legendre(order, 0.0, t.depth)?;
        let thetas = quad::periodic_uniform(order, 2.0 * PI);
        let zs = quad::periodic_uniform(order, t.epsilon);
        let mut nodes = Vec::with_capacity(order * order * order);
        for &(r, wr) in &rs {
            let w_r = wr * r.sinh() * r.cosh();
            for &(theta, wt) in &thetas {
                for &(z, wz) in &zs {
                    nodes.push(([r, theta, z], w_r * wt * wz));
                }
            }
        }
        Ok(Self { nodes })
    }

    pub fn integrate<F: FnMut(f64, f64, f64) -> f64>(&self, mut f: F) -> Result<f64> {
        let mut sum = 0.0;
        for &([r, theta, z], w) in &self.nodes {
            let v = f(r, theta, z);
            if !v.is_finite() {
                return Err(Error::NonFinite {
                    point: format!("(r={r}, theta={theta}, z={z})"),
                    value: v,
                });
            }
            sum += w * v;
        }
        Ok(sum)
    }

    pub fn form_norm_sq<F: FnMut(f64, f64, f64) -> CovectorFrame>(&self, mut field: F) -> Result<f64> {
        self.integrate(|r, th, z| field(r, th, z).norm_sq())
    }
}

/// Volume by quadrature of the density.
pub fn tube_volume_quadrature(t: &TubeChart, order: usize) -> Result<f64> {
    TubeQuadrature::new(t, order)?.integrate(|_, _, _| 1.0)
}

/// `‖dz/ε‖²` by quadrature of `|dz/ε|² = 1/(ε² cosh² r)`.
pub fn tube_form_norm_sq_quadrature(t: &TubeChart, order: usize) -> Result<f64> {
    let q = TubeQuadrature::new(t, order)?;
    q.form_norm_sq(|r, th, z| invariant_form(t, r, th, z))
}

/// `dz/ε` in the orthonormal coframe.
pub fn invariant_form(t: &TubeChart, r: f64, _theta: f64, _z: f64) -> CovectorFrame {
    CovectorFrame::new(0.0, 0.0, 1.0 / (t.epsilon * r.cosh()))
}

/// Radial bump `(1 − u²)³` supported in `(0.1R, 0.9R)`, with its derivative.
fn bump(depth: f64, r: f64) -> (f64, f64) {
    let (centre, half) = (0.5 * depth, 0.4 * depth);
    let u = (r - centre) / half;
    if u.abs() >= 1.0 {
        return (0.0, 0.0);
    }
    let v = 1.0 - u * u;
    (v * v * v, -6.0 * u * v * v / half)
}

/// `dz/ε + s·d(b(r) sin(2πz/ε))` in the orthonormal coframe.
pub fn competitor_form(t: &TubeChart, s: f64, r: f64, _theta: f64, z: f64) -> CovectorFrame {
    let k = 2.0 * PI / t.epsilon;
    let (b, db) = bump(t.depth, r);
    let (g, dg) = ((k * z).sin(), k * (k * z).cos());
    CovectorFrame::new(s * db * g, 0.0, (1.0 / t.epsilon + s * b * dg) / r.cosh())
}

/// Default perturbation sizes for the competitor check.
pub const COMPETITOR_STEPS: [f64; 4] = [0.1, -0.1, 0.01, -0.01];

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompetitorNorm {
    pub s: f64,
    pub norm: f64,
    /// `‖dz/ε‖` under the same quadrature rule.
    pub baseline: f64,
}

impl CompetitorNorm {
    pub fn beats_baseline(&self) -> bool {
        self.norm < self.baseline
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TubeBoundReport {
    pub bound: f64,
    pub competitors: Vec<CompetitorNorm>,
    pub minimal: bool,
}

/// L² norms of the perturbed competitors `dz/ε + s·dh` for each step.
pub fn verify_tube_minimality(t: &TubeChart, steps: &[f64], order: usize) -> Result<Vec<CompetitorNorm>> {
    let q = TubeQuadrature::new(t, order)?;
    let baseline = q.form_norm_sq(|r, th, z| invariant_form(t, r, th, z))?.sqrt();
    steps
        .iter()
        .map(|&s| {
            let norm = q.form_norm_sq(|r, th, z| competitor_form(t, s, r, th, z))?.sqrt();
            Ok(CompetitorNorm { s, norm, baseline })
        })
        .collect()
}

/// [`tube_lower_bound`] together with the competitor check on
/// [`COMPETITOR_STEPS`].
pub fn tube_lower_bound_checked(t: &TubeChart, order: usize) -> Result<TubeBoundReport> {
    let competitors = verify_tube_minimality(t, &COMPETITOR_STEPS, order)?;
    let minimal = competitors.iter().all(|c| !c.beats_baseline());
    Ok(TubeBoundReport {
        bound: tube_lower_bound(t),
        competitors,
        minimal,
    })
}

/// Coordinate components `(A, B, C)` of `A dr + B dθ + C dz`.
pub type CoordForm = dyn Fn(f64, f64, f64) -> [f64; 3];

/// Maximum finite-difference residuals `(|dα|, |d*α|)` on a grid of interior
/// points, using central differences of step `h`.
///
/// `dα` has components `∂_rB − ∂_θA`, `∂_rC − ∂_zA`, `∂_θC − ∂_zB`; the
/// coclosed residual is `∂_r(√g A) + ∂_θ(√g B / sinh²r) + ∂_z(√g C / cosh²r)`
/// with `√g = sinh r cosh r`.
pub fn harmonic_residuals(t: &TubeChart, alpha: &CoordForm, grid: usize, h: f64) -> (f64, f64) {
    let sqrt_g = |r: f64| r.sinh() * r.cosh();
    let mut closed: f64 = 0.0;
    let mut coclosed: f64 = 0.0;
    for i in 1..=grid {
        let r = t.depth * i as f64 / (grid + 1) as f64;
        for j in 0..grid {
            let th = 2.0 * PI * j as f64 / grid as f64;
            for k in 0..grid {
                let z = t.epsilon * k as f64 / grid as f64;
                let d = |f: &dyn Fn(f64, f64, f64) -> f64, axis: usize| {
                    let mut p = [r, th, z];
                    let mut q = [r, th, z];
                    p[axis] += h;
                    q[axis] -= h;
                    (f(p[0], p[1], p[2]) - f(q[0], q[1], q[2])) / (2.0 * h)
                };
                let comp = |c: usize| move |r: f64, th: f64, z: f64| alpha(r, th, z)[c];
                let (a, b, c) = (comp(0), comp(1), comp(2));
                let c1 = d(&b, 0) - d(&a, 1);
                let c2 = d(&c, 0) - d(&a, 2);
                let c3 = d(&c, 1) - d(&b, 2);
                closed = closed.max(c1.abs()).max(c2.abs()).max(c3.abs());
                let fr = |r: f64, th: f64, z: f64| sqrt_g(r) * alpha(r, th, z)[0];
                let ft = |r: f64, th: f64, z: f64| sqrt_g(r) * alpha(r, th, z)[1] / r.sinh().powi(2);
                let fz = |r: f64, th: f64, z: f64| sqrt_g(r) * alpha(r, th, z)[2] / r.cosh().powi(2);
                let div = d(&fr, 0) + d(&ft, 1) + d(&fz, 2);
                coclosed = coclosed.max(div.abs());
            }
        }
    }
    (closed, coclosed)
}

/// `∫_C α` along the core `r = 0`, `θ = θ₀`, by Gauss–Legendre in `z`.
pub fn core_period(t: &TubeChart, alpha: &CoordForm) -> Result<f64> {
    Ok(quad::gauss_legendre(16, 0.0, t.epsilon)?
        .into_iter()
        .map(|(z, w)| w * alpha(0.0, t.theta0, z)[2])
        .sum())
}

/// Sup/L² comparison for `dz/ε` on the volume-1 tube about a geodesic of
/// length `ε`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RemarkRatio {
    pub depth: f64,
    pub sup_norm: f64,
    pub l2_norm: f64,
    pub ratio: f64,
    /// `(ε log(1/ε))^{−1/2}`.
    pub predicted: f64,
}

pub fn remark_ratio(epsilon: f64) -> Result<RemarkRatio> {
    if !(epsilon > 0.0 && epsilon < 1.0 / PI) {
        return Err(domain("remark_ratio", format!("need 0 < ε < 1/π, got {epsilon}")));
    }
    let depth = (1.0 / (PI * epsilon).sqrt()).asinh();
    let t = TubeChart::new(epsilon, depth, 0.0)?;
    let sup_norm = 1.0 / epsilon;
    let l2_norm = tube_form_norm(&t);
    Ok(RemarkRatio {
        depth,
        sup_norm,
        l2_norm,
        ratio: sup_norm / l2_norm,
        predicted: (epsilon * (1.0 / epsilon).ln()).powf(-0.5),
    })
}
