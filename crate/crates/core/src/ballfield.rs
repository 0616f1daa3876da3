//! Harmonic functions and 1-forms on hyperbolic balls.
//!
//! Spherical harmonics use the real convention without the Condon–Shortley
//! phase:
//!
//! ```text
//! Y_ℓm = N_ℓ|m| P_ℓ^|m|(cos φ) · { √2 cos mθ  (m > 0),  1  (m = 0),  √2 sin |m|θ  (m < 0) }
//! N_ℓm = √((2ℓ+1)/(4π) · (ℓ−m)!/(ℓ+m)!),    P_ℓ^m(x) = (1 − x²)^{m/2} dᵐP_ℓ/dxᵐ
//! ```
//!
//! so that `{Y_ℓm}` is orthonormal on the unit sphere. Derivatives of `P_ℓ`
//! are taken through Gegenbauer polynomials, `dᵐP_ℓ/dxᵐ = (2m−1)!! C^{(m+1/2)}_{ℓ−m}`,
//! which keeps `P_ℓ^m / sin φ` regular at the poles.
//!
//! A 1-form is represented by its components in the orthonormal coframe
//! `{dr, sinh r dφ, sinh r sin φ dθ}`; for `ω_ℓm = d(ψ_ℓ Y_ℓm)` these are
//! `(Y ψ′, (ψ / sinh r) ∂_φY, (ψ / sinh r) ∂_θY / sin φ)`.

use std::collections::BTreeMap;
use std::f64::consts::{PI, SQRT_2};

use rand::rngs::StdRng;
use rand::{RngExt, SeedableRng};
use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::quad;
use crate::specfun;

/// A point of a hyperbolic ball in geodesic polar coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallPoint {
    pub r: f64,
    pub phi: f64,
    pub theta: f64,
}

impl BallPoint {
    pub fn new(r: f64, phi: f64, theta: f64) -> Result<Self> {
        if !(r >= 0.0 && r.is_finite()) {
            return Err(domain("BallPoint::new", format!("radius {r} out of range")));
        }
        if !(0.0..=PI).contains(&phi) {
            return Err(domain("BallPoint::new", format!("colatitude {phi} out of [0, π]")));
        }
        if !(0.0..2.0 * PI).contains(&theta) {
            return Err(domain("BallPoint::new", format!("longitude {theta} out of [0, 2π)")));
        }
        Ok(Self { r, phi, theta })
    }

    /// Density of the volume form `sinh²r sin φ dr dφ dθ`.
    pub fn volume_density(&self) -> f64 {
        self.r.sinh().powi(2) * self.phi.sin()
    }
}

/// Components of a covector against an orthonormal coframe at a point.
/// For tube charts the slots hold the `dr`, `sinh r dθ` and `cosh r dz`
/// components in that order.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CovectorFrame {
    pub c_r: f64,
    pub c_phi: f64,
    pub c_theta: f64,
}

impl CovectorFrame {
    pub const ZERO: Self = Self {
        c_r: 0.0,
        c_phi: 0.0,
        c_theta: 0.0,
    };

    pub fn new(c_r: f64, c_phi: f64, c_theta: f64) -> Self {
        Self { c_r, c_phi, c_theta }
    }

    pub fn norm_sq(&self) -> f64 {
        self.dot(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dot(&self, o: &Self) -> f64 {
        self.c_r * o.c_r + self.c_phi * o.c_phi + self.c_theta * o.c_theta
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(s * self.c_r, s * self.c_phi, s * self.c_theta)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.c_r + o.c_r, self.c_phi + o.c_phi, self.c_theta + o.c_theta)
    }

    pub fn is_finite(&self) -> bool {
        self.c_r.is_finite() && self.c_phi.is_finite() && self.c_theta.is_finite()
    }
}

fn check_indices(op: &'static str, ell: u32, m: i32) -> Result<()> {
    if m.unsigned_abs() > ell {
        Err(domain(op, format!("|m| = {} exceeds ell = {ell}", m.unsigned_abs())))
    } else {
        Ok(())
    }
}

/// Gegenbauer polynomial `C_n^{(α)}(x)` by the three-term recurrence.
fn gegenbauer(n: i64, alpha: f64, x: f64) -> f64 {
    match n {
        n if n < 0 => 0.0,
        0 => 1.0,
        _ => {
            let (mut prev, mut cur) = (1.0, 2.0 * alpha * x);
            for k in 2..=n {
                let k = k as f64;
                let next = (2.0 * x * (k + alpha - 1.0) * cur - (k + 2.0 * alpha - 2.0) * prev) / k;
                prev = cur;
                cur = next;
            }
            cur
        }
    }
}

fn double_factorial_odd(m: u32) -> f64 {
    // (2m − 1)!!
    (1..=m).map(|k| f64::from(2 * k - 1)).product()
}

/// `dᵐP_ℓ/dxᵐ` at `x`.
fn legendre_deriv(ell: u32, m: u32, x: f64) -> f64 {
    if m > ell {
        return 0.0;
    }
    double_factorial_odd(m) * gegenbauer(i64::from(ell - m), f64::from(m) + 0.5, x)
}

fn normalisation(ell: u32, m: u32) -> f64 {
    // (ℓ−m)!/(ℓ+m)! as a product of reciprocals
    let ratio: f64 = ((ell - m + 1)..=(ell + m)).map(|k| 1.0 / f64::from(k)).product();
    ((2.0 * f64::from(ell) + 1.0) / (4.0 * PI) * ratio).sqrt()
}

/// `(Y, ∂_φY, ∂_θY / sin φ)` for the real harmonic `Y_ℓm`.
fn angular(ell: u32, m: i32, phi: f64, theta: f64) -> (f64, f64, f64) {
    let am = m.unsigned_abs();
    let (s, c) = phi.sin_cos();
    let q = legendre_deriv(ell, am, c);
    let dq = legendre_deriv(ell, am + 1, c);
    let p = s.powi(am as i32) * q;
    let (dp, p_over_s) = if am == 0 {
        (-s * dq, 0.0)
    } else {
        let sm1 = s.powi(am as i32 - 1);
        (f64::from(am) * sm1 * c * q - s.powi(am as i32 + 1) * dq, sm1 * q)
    };
    let n = normalisation(ell, am);
    let mf = f64::from(am);
    let (trig, dtrig) = match m.signum() {
        0 => (1.0, 0.0),
        1 => (SQRT_2 * (mf * theta).cos(), -SQRT_2 * mf * (mf * theta).sin()),
        _ => (SQRT_2 * (mf * theta).sin(), SQRT_2 * mf * (mf * theta).cos()),
    };
    (n * p * trig, n * dp * trig, n * p_over_s * dtrig)
}

/// Real orthonormal spherical harmonic `Y_ℓm(φ, θ)`.
pub fn sph_harm(ell: u32, m: i32, phi: f64, theta: f64) -> Result<f64> {
    check_indices("sph_harm", ell, m)?;
    Ok(angular(ell, m, phi, theta).0)
}

/// `(∂_φY_ℓm, ∂_θY_ℓm / sin φ)`, the sphere gradient in an orthonormal frame.
pub fn sph_harm_grad(ell: u32, m: i32, phi: f64, theta: f64) -> Result<(f64, f64)> {
    check_indices("sph_harm_grad", ell, m)?;
    let (_, dphi, dtheta) = angular(ell, m, phi, theta);
    Ok((dphi, dtheta))
}

/// `Ψ_ℓm(p) = ψ_ℓ(r) Y_ℓm(φ, θ)`.
pub fn eval_basis(ell: u32, m: i32, p: &BallPoint) -> Result<f64> {
    check_indices("eval_basis", ell, m)?;
    Ok(specfun::psi(ell, p.r)? * angular(ell, m, p.phi, p.theta).0)
}

/// Radial factors `(ψ_ℓ, ψ_ℓ′, ψ_ℓ / sinh r)` with the limits at `r = 0`.
fn radial(ell: u32, r: f64) -> (f64, f64, f64) {
    let psi = specfun::psi_series(ell, r);
    let dpsi = specfun::dpsi_series(ell, r);
    let over_sinh = if r > 0.0 {
        psi / r.sinh()
    } else if ell == 1 {
        2.0 / 3.0
    } else {
        0.0
    };
    (psi, dpsi, over_sinh)
}

fn omega_from_parts(rad: (f64, f64, f64), ang: (f64, f64, f64)) -> CovectorFrame {
    let (_, dpsi, over_sinh) = rad;
    let (y, dphi, dtheta) = ang;
    CovectorFrame::new(y * dpsi, over_sinh * dphi, over_sinh * dtheta)
}

/// `ω_ℓm = dΨ_ℓm` in the orthonormal coframe. At the centre the ℓ = 1 modes
/// use the analytic limit `ψ₁/sinh r → ψ₁′(0) = 2/3`; all other modes vanish
/// there.
pub fn eval_omega(ell: u32, m: i32, p: &BallPoint) -> Result<CovectorFrame> {
    check_indices("eval_omega", ell, m)?;
    if ell == 0 {
        return Ok(CovectorFrame::ZERO);
    }
    check_radius(p.r)?;
    Ok(omega_from_parts(radial(ell, p.r), angular(ell, m, p.phi, p.theta)))
}

fn check_radius(r: f64) -> Result<()> {
    if r.is_nan() || r < 0.0 {
        Err(domain("ballfield", format!("radius must be nonnegative, got {r}")))
    } else {
        Ok(())
    }
}

/// Truncated expansion `f = Σ a_ℓm Ψ_ℓm` with `|m| ≤ ℓ ≤ L`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicExpansion {
    truncation: u32,
    coefficients: BTreeMap<(u32, i32), f64>,
}

impl HarmonicExpansion {
    pub fn new(truncation: u32) -> Self {
        Self {
            truncation,
            coefficients: BTreeMap::new(),
        }
    }

    /// Builds an expansion from `(ℓ, m, a_ℓm)` triples; the truncation is the
    /// largest ℓ present.
    pub fn from_terms(terms: &[(u32, i32, f64)]) -> Result<Self> {
        let truncation = terms.iter().map(|t| t.0).max().unwrap_or(0);
        let mut e = Self::new(truncation);
        for &(ell, m, a) in terms {
            e.set(ell, m, a)?;
        }
        Ok(e)
    }

    /// Coefficients drawn uniformly from `[-1, 1]` for every index up to `L`.
    pub fn random(truncation: u32, seed: u64) -> Self {
        let mut rng = StdRng::seed_from_u64(seed);
        let mut e = Self::new(truncation);
        for ell in 0..=truncation {
            for m in -(ell as i32)..=(ell as i32) {
                e.coefficients.insert((ell, m), rng.random_range(-1.0..=1.0));
            }
        }
        e
    }

    pub fn truncation(&self) -> u32 {
        self.truncation
    }

    pub fn set(&mut self, ell: u32, m: i32, a: f64) -> Result<()> {
        check_indices("HarmonicExpansion::set", ell, m)?;
        if ell > self.truncation {
            return Err(domain(
                "HarmonicExpansion::set",
                format!("ell = {ell} exceeds truncation {}", self.truncation),
            ));
        }
        self.coefficients.insert((ell, m), a);
        Ok(())
    }

    pub fn get(&self, ell: u32, m: i32) -> f64 {
        self.coefficients.get(&(ell, m)).copied().unwrap_or(0.0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, i32, f64)> + '_ {
        self.coefficients.iter().map(|(&(l, m), &a)| (l, m, a))
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.values().all(|&a| a == 0.0)
    }

    pub fn eval(&self, p: &BallPoint) -> Result<f64> {
        check_radius(p.r)?;
        let radials: Vec<f64> = (0..=self.truncation)
            .map(|l| specfun::psi_series(l, p.r))
            .collect();
        Ok(self
            .terms()
            .map(|(l, m, a)| a * radials[l as usize] * angular(l, m, p.phi, p.theta).0)
            .sum())
    }

    /// `df` at `p` in the orthonormal coframe.
    pub fn differential(&self, p: &BallPoint) -> Result<CovectorFrame> {
        check_radius(p.r)?;
        let radials: Vec<_> = (0..=self.truncation).map(|l| radial(l, p.r)).collect();
        Ok(self
            .terms()
            .filter(|t| t.0 > 0)
            .fold(CovectorFrame::ZERO, |acc, (l, m, a)| {
                let w = omega_from_parts(radials[l as usize], angular(l, m, p.phi, p.theta));
                acc.add(&w.scale(a))
            }))
    }

    /// `‖df‖²_{L²(B_r)} = Σ_{ℓ≥1} a_ℓm² N_ℓ(r)` from orthogonality of the ω_ℓm.
    pub fn parseval_norm_sq(&self, r: f64) -> Result<f64> {
        let mut norms = vec![0.0; self.truncation as usize + 1];
        for (l, n) in norms.iter_mut().enumerate().skip(1) {
            *n = specfun::mode_norm(l as u32, r)?;
        }
        Ok(self
            .terms()
            .filter(|t| t.0 > 0)
            .map(|(l, _, a)| a * a * norms[l as usize])
            .sum())
    }
}

/// Default nodes per axis for ball quadrature.
pub const DEFAULT_ORDER: usize = 48;

/// Tensor-product rule on `B_r`: Gauss–Legendre in `r` and `φ`, uniform in
/// `θ`, weights including the volume density.
#[derive(Debug, Clone)]
pub struct BallQuadrature {
    nodes: Vec<(BallPoint, f64)>,
}

impl BallQuadrature {
    pub fn new(r: f64, order: usize) -> Result<Self> {
        if order < 4 {
            return Err(domain("BallQuadrature::new", format!("order {order} below 4")));
        }
        if !(r > 0.0 && r.is_finite()) {
            return Err(domain("BallQuadrature::new", format!("radius must be positive, got {r}")));
        }
        let rs = quad::gauss_legendre(order, 0.0, r)?;
        let phis = quad::gauss_legendre(order, 0.0, PI)?;
        let thetas = quad::periodic_uniform(order, 2.0 * PI);
        let mut nodes = Vec::with_capacity(order * order * order);
        for &(r, wr) in &rs {
            for &(phi, wp) in &phis {
                for &(theta, wt) in &thetas {
                    let p = BallPoint { r, phi, theta };
                    nodes.push((p, wr * wp * wt * p.volume_density()));
                }
            }
        }
        Ok(Self { nodes })
    }

    pub fn nodes(&self) -> &[(BallPoint, f64)] {
        &self.nodes
    }

    pub fn integrate<F: FnMut(&BallPoint) -> Result<f64>>(&self, mut f: F) -> Result<f64> {
        let mut sum = 0.0;
        for (p, w) in &self.nodes {
            let v = f(p)?;
            if !v.is_finite() {
                return Err(nonfinite(p, v));
            }
            sum += w * v;
        }
        Ok(sum)
    }

    /// `∫ |α|²` for a covector field.
    pub fn form_norm_sq<F: FnMut(&BallPoint) -> Result<CovectorFrame>>(&self, mut field: F) -> Result<f64> {
        self.integrate(|p| {
            let a = field(p)?;
            if !a.is_finite() {
                return Err(nonfinite(p, a.norm_sq()));
            }
            Ok(a.norm_sq())
        })
    }

    /// Gram matrix `∫ f_i f_j` of scalar fields sampled once per node.
    pub fn gram_scalar<F: FnMut(usize, &BallPoint) -> Result<f64>>(&self, count: usize, mut f: F) -> Result<Vec<Vec<f64>>> {
        let mut samples = vec![Vec::with_capacity(self.nodes.len()); count];
        for (p, _) in &self.nodes {
            for (i, s) in samples.iter_mut().enumerate() {
                let v = f(i, p)?;
                if !v.is_finite() {
                    return Err(nonfinite(p, v));
                }
                s.push(v);
            }
        }
        Ok(self.gram(&samples, 1))
    }

    /// Gram matrix `∫ ⟨α_i, α_j⟩` of covector fields sampled once per node.
    pub fn gram_forms<F: FnMut(usize, &BallPoint) -> Result<CovectorFrame>>(
        &self,
        count: usize,
        mut f: F,
    ) -> Result<Vec<Vec<f64>>> {
        let mut samples = vec![Vec::with_capacity(3 * self.nodes.len()); count];
        for (p, _) in &self.nodes {
            for (i, s) in samples.iter_mut().enumerate() {
                let a = f(i, p)?;
                if !a.is_finite() {
                    return Err(nonfinite(p, a.norm_sq()));
                }
                s.extend([a.c_r, a.c_phi, a.c_theta]);
            }
        }
        Ok(self.gram(&samples, 3))
    }

    fn gram(&self, samples: &[Vec<f64>], stride: usize) -> Vec<Vec<f64>> {
        let n = samples.len();
        let mut g = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in i..n {
                let v: f64 = self
                    .nodes
                    .iter()
                    .enumerate()
                    .map(|(k, (_, w))| {
                        let (a, b) = (&samples[i][k * stride..], &samples[j][k * stride..]);
                        w * (0..stride).map(|c| a[c] * b[c]).sum::<f64>()
                    })
                    .sum();
                g[i][j] = v;
                g[j][i] = v;
            }
        }
        g
    }
}

/// Index pairs `(ℓ, m)` with `ℓ ≤ max_ell`, starting from `min_ell`.
pub fn mode_indices(min_ell: u32, max_ell: u32) -> Vec<(u32, i32)> {
    (min_ell..=max_ell)
        .flat_map(|l| (-(l as i32)..=(l as i32)).map(move |m| (l, m)))
        .collect()
}

/// Gram matrix of a list of modes under the L² inner product on a ball.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gram {
    pub modes: Vec<(u32, i32)>,
    pub matrix: Vec<Vec<f64>>,
}

impl Gram {
    /// `max_{i≠j} |G_ij| / √(G_ii G_jj)`.
    pub fn max_relative_off_diagonal(&self) -> f64 {
        let g = &self.matrix;
        let mut worst: f64 = 0.0;
        for i in 0..g.len() {
            for j in 0..g.len() {
                if i != j {
                    worst = worst.max(g[i][j].abs() / (g[i][i] * g[j][j]).sqrt());
                }
            }
        }
        worst
    }
}

/// Radial factors for every ℓ ≤ `max_ell`, recomputed only when `r` changes.
struct RadialCache {
    r: f64,
    values: Vec<(f64, f64, f64)>,
}

impl RadialCache {
    fn new(max_ell: u32) -> Self {
        Self {
            r: f64::NAN,
            values: vec![(0.0, 0.0, 0.0); max_ell as usize + 1],
        }
    }

    fn at(&mut self, r: f64) -> &[(f64, f64, f64)] {
        if r != self.r {
            self.r = r;
            for (l, v) in self.values.iter_mut().enumerate() {
                *v = radial(l as u32, r);
            }
        }
        &self.values
    }
}

/// Gram matrix of the `Ψ_ℓm`, `ℓ ≤ max_ell`, on `B_r`.
pub fn basis_gram(r: f64, order: usize, max_ell: u32) -> Result<Gram> {
    let modes = mode_indices(0, max_ell);
    let q = BallQuadrature::new(r, order)?;
    let mut cache = RadialCache::new(max_ell);
    let matrix = q.gram_scalar(modes.len(), |i, p| {
        let (l, m) = modes[i];
        Ok(cache.at(p.r)[l as usize].0 * angular(l, m, p.phi, p.theta).0)
    })?;
    Ok(Gram { modes, matrix })
}

/// Gram matrix of the `ω_ℓm`, `1 ≤ ℓ ≤ max_ell`, on `B_r`.
pub fn omega_gram(r: f64, order: usize, max_ell: u32) -> Result<Gram> {
    let modes = mode_indices(1, max_ell);
    let q = BallQuadrature::new(r, order)?;
    let mut cache = RadialCache::new(max_ell);
    let matrix = q.gram_forms(modes.len(), |i, p| {
        let (l, m) = modes[i];
        Ok(omega_from_parts(cache.at(p.r)[l as usize], angular(l, m, p.phi, p.theta)))
    })?;
    Ok(Gram { modes, matrix })
}

fn nonfinite(p: &BallPoint, value: f64) -> Error {
    Error::NonFinite {
        point: format!("(r={}, phi={}, theta={})", p.r, p.phi, p.theta),
        value,
    }
}

/// `∫_{B_r} |α|² dVol` by tensor-product quadrature of the given order.
pub fn ball_l2_norm_sq<F: FnMut(&BallPoint) -> Result<CovectorFrame>>(field: F, r: f64, order: usize) -> Result<f64> {
    BallQuadrature::new(r, order)?.form_norm_sq(field)
}

/// `⟨α, β⟩_{L²(B_r)}` by polarisation, `(‖α+β‖² − ‖α−β‖²)/4`.
pub fn ball_l2_inner<F, G>(mut alpha: F, mut beta: G, r: f64, order: usize) -> Result<f64>
where
    F: FnMut(&BallPoint) -> Result<CovectorFrame>,
    G: FnMut(&BallPoint) -> Result<CovectorFrame>,
{
    let q = BallQuadrature::new(r, order)?;
    let plus = q.form_norm_sq(|p| Ok(alpha(p)?.add(&beta(p)?)))?;
    let minus = q.form_norm_sq(|p| Ok(alpha(p)?.add(&beta(p)?.scale(-1.0))))?;
    Ok(0.25 * (plus - minus))
}

/// Outcome of the pointwise gradient bound `|df_p| ≤ ‖df‖_{L²(B_r(p))} / √ν(r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DfBoundReport {
    pub df_at_center: f64,
    pub l2_norm: f64,
    pub ratio: f64,
}

/// Evaluates `|df_p| √ν(r) / ‖df‖_{L²(B_r)}` for the expansion centred at `p`.
/// Only the ℓ = 1 modes contribute at the centre, each with `|dΨ_1m| = 1/√(3π)`.
pub fn check_df_bound(expansion: &HarmonicExpansion, r: f64) -> Result<DfBoundReport> {
    let centre_sq: f64 = (-1..=1).map(|m| expansion.get(1, m).powi(2)).sum();
    let df_at_center = (centre_sq / (3.0 * PI)).sqrt();
    let l2_norm = expansion.parseval_norm_sq(r)?.sqrt();
    let ratio = if l2_norm == 0.0 {
        0.0
    } else {
        df_at_center * specfun::nu(r)?.sqrt() / l2_norm
    };
    Ok(DfBoundReport {
        df_at_center,
        l2_norm,
        ratio,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_harmonic() {
        let y = sph_harm(0, 0, 1.1, 4.0).unwrap();
        assert!((y - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn first_zonal_harmonic() {
        for &phi in &[0.0, 0.3, 1.2, 2.9, PI] {
            let y = sph_harm(1, 0, phi, 0.7).unwrap();
            assert!((y - (3.0 / (4.0 * PI)).sqrt() * phi.cos()).abs() < 1e-15);
        }
    }

    #[test]
    fn bad_order_is_rejected() {
        assert!(sph_harm(1, 2, 0.1, 0.1).is_err());
        assert!(sph_harm(2, -3, 0.1, 0.1).is_err());
        assert!(BallQuadrature::new(1.0, 3).is_err());
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let h = 1e-6;
        for ell in 0..5u32 {
            for m in -(ell as i32)..=(ell as i32) {
                let (phi, theta) = (0.9, 2.1);
                let (dphi, dtheta) = sph_harm_grad(ell, m, phi, theta).unwrap();
                let fd_phi = (sph_harm(ell, m, phi + h, theta).unwrap()
                    - sph_harm(ell, m, phi - h, theta).unwrap())
                    / (2.0 * h);
                let fd_theta = (sph_harm(ell, m, phi, theta + h).unwrap()
                    - sph_harm(ell, m, phi, theta - h).unwrap())
                    / (2.0 * h * phi.sin());
                assert!((dphi - fd_phi).abs() < 1e-7, "{ell} {m}");
                assert!((dtheta - fd_theta).abs() < 1e-7, "{ell} {m}");
            }
        }
    }

    #[test]
    fn basis_vanishes_at_centre() {
        let p = BallPoint::new(0.0, 0.4, 1.0).unwrap();
        assert_eq!(eval_basis(2, 1, &p).unwrap(), 0.0);
        let c = eval_basis(0, 0, &p).unwrap();
        assert!((c - 1.0 / (4.0 * PI).sqrt()).abs() < 1e-15);
    }

    #[test]
    fn normalised_first_mode_has_unit_length_at_centre() {
        let p = BallPoint::new(0.0, 0.0, 0.0).unwrap();
        let w = eval_omega(1, 0, &p).unwrap().scale((3.0 * PI).sqrt());
        assert!((w.norm() - 1.0).abs() < 1e-14);
        let tiny = BallPoint::new(1e-7, 0.0, 0.0).unwrap();
        let w = eval_omega(1, 0, &tiny).unwrap().scale((3.0 * PI).sqrt());
        assert!((w.norm() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn constant_mode_has_zero_differential() {
        let p = BallPoint::new(0.8, 1.0, 1.0).unwrap();
        assert_eq!(eval_omega(0, 0, &p).unwrap(), CovectorFrame::ZERO);
        let centre = BallPoint::new(0.0, 1.0, 1.0).unwrap();
        assert_eq!(eval_omega(3, -2, &centre).unwrap(), CovectorFrame::ZERO);
    }

    #[test]
    fn zero_field_integrates_to_zero() {
        assert_eq!(ball_l2_norm_sq(|_| Ok(CovectorFrame::ZERO), 1.0, 8).unwrap(), 0.0);
    }

    #[test]
    fn nonfinite_sample_reports_point() {
        let err = ball_l2_norm_sq(|_| Ok(CovectorFrame::new(f64::NAN, 0.0, 0.0)), 1.0, 4).unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }));
    }

    #[test]
    fn constants_give_zero_ratio() {
        let e = HarmonicExpansion::from_terms(&[(0, 0, 5.0)]).unwrap();
        let rep = check_df_bound(&e, 1.0).unwrap();
        assert_eq!((rep.df_at_center, rep.ratio), (0.0, 0.0));
    }

    #[test]
    fn expansion_rejects_out_of_range_index() {
        let mut e = HarmonicExpansion::new(2);
        assert!(e.set(3, 0, 1.0).is_err());
        assert!(e.set(2, 3, 1.0).is_err());
        assert!(e.set(2, -2, 1.0).is_ok());
    }

    #[test]
    fn random_expansion_is_reproducible() {
        assert_eq!(HarmonicExpansion::random(3, 9), HarmonicExpansion::random(3, 9));
        assert_ne!(HarmonicExpansion::random(3, 9), HarmonicExpansion::random(3, 10));
    }
}
