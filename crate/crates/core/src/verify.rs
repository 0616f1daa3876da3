//! Named invariant suites. Each check records a computed value, the tolerance
//! it was held to, and whether it passed.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::ballfield::{self, BallQuadrature, HarmonicExpansion};
use crate::error::{domain, Error, Result};
use crate::fibering::{self, BrownStatus, Word};
use crate::homalg::{self, IntMat, Lattice, TwistData};
use crate::specfun;
use crate::tubefield::{self, TubeChart};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub anchor: String,
    pub value: f64,
    pub tol: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: &str, anchor: &str, value: f64, tol: f64, pass: bool) -> Self {
        Self {
            name: name.to_string(),
            anchor: anchor.to_string(),
            value,
            tol,
            pass,
        }
    }

    /// Passes when `value ≤ tol`.
    fn at_most(name: &str, anchor: &str, value: f64, tol: f64) -> Self {
        Self::new(name, anchor, value, tol, value <= tol)
    }

    /// Exact predicate; `value` is 1 or 0.
    fn exact(name: &str, anchor: &str, ok: bool) -> Self {
        Self::new(name, anchor, if ok { 1.0 } else { 0.0 }, 0.0, ok)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Ball,
    Tube,
    Dfbound,
    Homalg,
    Bns,
}

impl Suite {
    pub const ALL: [Suite; 5] = [Suite::Ball, Suite::Tube, Suite::Dfbound, Suite::Homalg, Suite::Bns];

    pub fn name(&self) -> &'static str {
        match self {
            Suite::Ball => "ball",
            Suite::Tube => "tube",
            Suite::Dfbound => "dfbound",
            Suite::Homalg => "homalg",
            Suite::Bns => "bns",
        }
    }

    pub fn anchors(&self) -> &'static [&'static str] {
        match self {
            Suite::Ball => &[ANCHOR_ORTHO_FN, ANCHOR_ORTHO_FORM, ANCHOR_PARSEVAL, ANCHOR_NU_BALL],
            Suite::Tube => &[ANCHOR_TUBE_VOLUME, ANCHOR_TUBE_NORM, ANCHOR_TUBE_MIN, ANCHOR_TUBE_HARMONIC, ANCHOR_REMARK],
            Suite::Dfbound => &[ANCHOR_DF_SHARP, ANCHOR_DF_BOUND, ANCHOR_PARSEVAL],
            Suite::Homalg => &[ANCHOR_SYMPLECTIC, ANCHOR_TWIST, ANCHOR_MV, ANCHOR_GROWTH],
            Suite::Bns => &[ANCHOR_ABELIAN, ANCHOR_BROWN],
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| domain("Suite::from_str", format!("unknown suite {s:?}")))
    }
}

pub const ANCHOR_ORTHO_FN: &str = "harmonic basis orthogonality in L2(B)";
pub const ANCHOR_ORTHO_FORM: &str = "harmonic 1-form orthogonality in L2(B)";
pub const ANCHOR_PARSEVAL: &str = "mode-norm Parseval identity";
pub const ANCHOR_NU_BALL: &str = "nu as L2 norm of the normalised first mode";
pub const ANCHOR_DF_SHARP: &str = "gradient bound equality for first modes";
pub const ANCHOR_DF_BOUND: &str = "pointwise gradient bound |df_p| <= |df|/sqrt(nu)";
pub const ANCHOR_TUBE_VOLUME: &str = "tube volume pi eps sinh^2 R";
pub const ANCHOR_TUBE_NORM: &str = "tube form norm (2 pi/eps) log cosh R";
pub const ANCHOR_TUBE_MIN: &str = "dz/eps minimises the tube norm";
pub const ANCHOR_TUBE_HARMONIC: &str = "dz is closed and coclosed";
pub const ANCHOR_REMARK: &str = "sup/L2 ratio on unit-volume tubes";
pub const ANCHOR_SYMPLECTIC: &str = "B^t J B = J";
pub const ANCHOR_TWIST: &str = "monodromy as a product of Dehn twists";
pub const ANCHOR_MV: &str = "Mayer-Vietoris generator F^n e1";
pub const ANCHOR_GROWTH: &str = "growth rate (3+sqrt5)/2 of F-bar powers";
pub const ANCHOR_ABELIAN: &str = "H1 of x064 is Z^2";
pub const ANCHOR_BROWN: &str = "Brown criterion for fibered characters";

/// Quadrature order, seed and named tolerance overrides.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub order: usize,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            order: ballfield::DEFAULT_ORDER,
            seed: 0,
            tolerances: BTreeMap::new(),
        }
    }
}

/// Default tolerances by name.
pub const DEFAULT_TOLERANCES: [(&str, f64); 9] = [
    ("orthogonality", 1e-8),
    ("parseval", 1e-6),
    ("nu_ball", 1e-8),
    ("sharpness", 1e-9),
    ("tube_closed_form", 1e-9),
    ("residual", 1e-10),
    ("period", 1e-12),
    ("remark_low", 0.3),
    ("remark_high", 3.0),
];

impl VerifyConfig {
    pub fn tol(&self, name: &str) -> f64 {
        self.tolerances.get(name).copied().unwrap_or_else(|| {
            DEFAULT_TOLERANCES
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, v)| *v)
                .unwrap_or_else(|| panic!("no default tolerance named {name}"))
        })
    }

    /// Rejects unknown tolerance names and orders below 4.
    pub fn validate(&self) -> Result<()> {
        if self.order < 4 {
            return Err(domain("VerifyConfig", format!("quadrature order {} below 4", self.order)));
        }
        for k in self.tolerances.keys() {
            if !DEFAULT_TOLERANCES.iter().any(|(n, _)| n == k) {
                return Err(domain("VerifyConfig", format!("unknown tolerance {k:?}")));
            }
        }
        Ok(())
    }
}

pub fn run_suite(suite: Suite, cfg: &VerifyConfig) -> Result<Vec<Check>> {
    cfg.validate()?;
    match suite {
        Suite::Ball => ball_suite(cfg),
        Suite::Tube => tube_suite(cfg),
        Suite::Dfbound => dfbound_suite(cfg),
        Suite::Homalg => homalg_suite(),
        Suite::Bns => bns_suite(cfg),
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn ball_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let tol = cfg.tol("orthogonality");
    for &r in &[0.5, 2.0] {
        let g = ballfield::basis_gram(r, cfg.order, 3)?;
        out.push(Check::at_most(
            &format!("Psi orthogonality l<=3, r={r}"),
            ANCHOR_ORTHO_FN,
            g.max_relative_off_diagonal(),
            tol,
        ));
        let g = ballfield::omega_gram(r, cfg.order, 3)?;
        out.push(Check::at_most(
            &format!("omega orthogonality l<=3, r={r}"),
            ANCHOR_ORTHO_FORM,
            g.max_relative_off_diagonal(),
            tol,
        ));
        let diag_err = g
            .modes
            .iter()
            .enumerate()
            .map(|(i, &(l, _))| Ok(rel(g.matrix[i][i], specfun::mode_norm(l, r)?)))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        out.push(Check::at_most(
            &format!("omega self norms equal N_l, r={r}"),
            ANCHOR_PARSEVAL,
            diag_err,
            cfg.tol("parseval"),
        ));
    }
    for k in 0..3u64 {
        let e = HarmonicExpansion::random(3, cfg.seed.wrapping_add(k));
        let r = 1.0;
        let q = BallQuadrature::new(r, cfg.order)?;
        let quad = q.form_norm_sq(|p| e.differential(p))?;
        let parseval = e.parseval_norm_sq(r)?;
        out.push(Check::at_most(
            &format!("Parseval random L=3 expansion #{k}, r={r}"),
            ANCHOR_PARSEVAL,
            rel(quad, parseval),
            cfg.tol("parseval"),
        ));
    }
    let scale = (3.0 * PI).sqrt();
    let field = |p: &ballfield::BallPoint| Ok(ballfield::eval_omega(1, 0, p)?.scale(scale));
    let v = ballfield::ball_l2_norm_sq(field, 1.0, cfg.order)?;
    out.push(Check::at_most(
        "|sqrt(3 pi) omega_10|^2 on B_1 equals nu(1)",
        ANCHOR_NU_BALL,
        rel(v, specfun::nu(1.0)?),
        cfg.tol("nu_ball"),
    ));
    Ok(out)
}

fn dfbound_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let tol = cfg.tol("sharpness");
    let pure = HarmonicExpansion::from_terms(&[(1, 0, 1.0)])?;
    for &r in &[0.3, 1.0, 3.0] {
        let rep = ballfield::check_df_bound(&pure, r)?;
        out.push(Check::at_most(
            &format!("pure (1,0) mode ratio, r={r}"),
            ANCHOR_DF_SHARP,
            (rep.ratio - 1.0).abs(),
            tol,
        ));
    }
    let mut worst: f64 = 0.0;
    for k in 0..200u64 {
        let r = [0.3, 1.0, 3.0][(k % 3) as usize];
        let e = HarmonicExpansion::random(4, cfg.seed.wrapping_add(1000 + k));
        worst = worst.max(ballfield::check_df_bound(&e, r)?.ratio);
    }
    out.push(Check::new(
        "max ratio over 200 random L=4 expansions",
        ANCHOR_DF_BOUND,
        worst,
        tol,
        worst <= 1.0 + tol,
    ));
    let e = HarmonicExpansion::random(4, cfg.seed.wrapping_add(7));
    let rep = ballfield::check_df_bound(&e, 1.0)?;
    let q = BallQuadrature::new(1.0, cfg.order)?;
    let quad = q.form_norm_sq(|p| e.differential(p))?.sqrt();
    out.push(Check::at_most(
        "l2_norm vs ball quadrature, L=4, r=1",
        ANCHOR_PARSEVAL,
        rel(rep.l2_norm, quad),
        cfg.tol("parseval"),
    ));
    Ok(out)
}

/// `(ε, R)` grid for the tube closed-form checks.
pub const TUBE_GRID: [(f64, f64); 9] = [
    (0.01, 0.5),
    (0.01, 2.431_1),
    (0.01, 4.0),
    (0.29, 0.5),
    (0.29, 2.0),
    (0.29, 4.0),
    (1.0, 0.5),
    (1.0, 2.0),
    (1.0, 4.0),
];

/// Log grid of core lengths for the sup/L² remark.
pub fn remark_grid(points: usize) -> Vec<f64> {
    (0..points)
        .map(|i| 10f64.powf(-6.0 + 4.0 * i as f64 / (points - 1) as f64))
        .collect()
}

fn tube_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let tol = cfg.tol("tube_closed_form");
    let mut worst_vol: f64 = 0.0;
    let mut worst_norm: f64 = 0.0;
    let mut minimal = true;
    for &(eps, depth) in &TUBE_GRID {
        let t = TubeChart::new(eps, depth, 0.0)?;
        worst_vol = worst_vol.max(rel(tubefield::tube_volume_quadrature(&t, cfg.order)?, tubefield::tube_volume(&t)));
        worst_norm = worst_norm.max(rel(
            tubefield::tube_form_norm_sq_quadrature(&t, cfg.order)?,
            tubefield::tube_form_norm(&t).powi(2),
        ));
        minimal &= tubefield::tube_lower_bound_checked(&t, cfg.order)?.minimal;
    }
    out.push(Check::at_most("volume quadrature, 3x3 grid", ANCHOR_TUBE_VOLUME, worst_vol, tol));
    out.push(Check::at_most("form norm quadrature, 3x3 grid", ANCHOR_TUBE_NORM, worst_norm, tol));
    out.push(Check::exact("no competitor beats dz/eps", ANCHOR_TUBE_MIN, minimal));

    let t = TubeChart::new(0.29, 2.0, 1.0)?;
    let eps = t.epsilon();
    let dz = move |_r: f64, _th: f64, _z: f64| [0.0, 0.0, 1.0 / eps];
    let (closed, coclosed) = tubefield::harmonic_residuals(&t, &dz, 6, 1e-4);
    let rtol = cfg.tol("residual");
    out.push(Check::at_most("d(dz/eps) residual", ANCHOR_TUBE_HARMONIC, closed, rtol));
    out.push(Check::at_most("d*(dz/eps) residual", ANCHOR_TUBE_HARMONIC, coclosed, rtol));
    let period = tubefield::core_period(&t, &dz)?;
    out.push(Check::at_most(
        "core period of dz/eps",
        ANCHOR_TUBE_HARMONIC,
        (period - 1.0).abs(),
        cfg.tol("period"),
    ));

    let rows = remark_grid(25)
        .into_iter()
        .map(tubefield::remark_ratio)
        .collect::<Result<Vec<_>>>()?;
    let q: Vec<f64> = rows.iter().map(|r| r.ratio / r.predicted).collect();
    let (lo, hi) = (cfg.tol("remark_low"), cfg.tol("remark_high"));
    let qmin = q.iter().copied().fold(f64::INFINITY, f64::min);
    let qmax = q.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    out.push(Check::new("min ratio/predicted over eps grid", ANCHOR_REMARK, qmin, lo, qmin >= lo));
    out.push(Check::new("max ratio/predicted over eps grid", ANCHOR_REMARK, qmax, hi, qmax <= hi));
    let decreasing = rows.windows(2).all(|w| w[1].ratio < w[0].ratio);
    out.push(Check::exact("sup/L2 ratio decreasing in eps", ANCHOR_REMARK, decreasing));
    Ok(out)
}

fn homalg_suite() -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let (b, j, f) = (homalg::matrix_b(), homalg::matrix_j(), homalg::matrix_f());
    out.push(Check::exact("B^t J B = J", ANCHOR_SYMPLECTIC, homalg::symplectic_check(&b, &j)?));
    let composed = TwistData::genus2().compose(&j)?;
    out.push(Check::exact("fixture twist word composes to B", ANCHOR_TWIST, composed == b));

    let e13 = Lattice::from_i64(4, &[vec![1, 0, 0, 0], vec![0, 0, 1, 0]])?;
    out.push(Check::exact("F preserves <e1, e3>", ANCHOR_MV, e13.image(&f)? == e13));

    let mut mv_ok = true;
    for n in 0..=60 {
        let lat = homalg::mv_intersection(n)?;
        mv_ok &= lat.rank() == 1 && homalg::mv_generator(n).is_ok();
    }
    out.push(Check::exact("MV intersection rank 1 generated by F^n e1, n<=60", ANCHOR_MV, mv_ok));

    let fbar = homalg::matrix_fbar();
    let mut power = IntMat::identity(2);
    let mut unimodular = true;
    for _ in 0..=200 {
        let (a, c) = (power.get(0, 0).clone(), power.get(1, 0).clone());
        unimodular &= power.det()?.is_one() && a.gcd(&c).is_one();
        power = power.mul(&fbar)?;
    }
    out.push(Check::exact("det F-bar^n = 1 and gcd(a_n, c_n) = 1, n<=200", ANCHOR_MV, unimodular));

    let seq: Vec<_> = (0..=201).map(homalg::fbar_power).collect();
    let three = BigInt::from(3);
    let recurrence = seq
        .windows(3)
        .all(|w| w[2].a == &three * &w[1].a - &w[0].a && w[2].c == &three * &w[1].c - &w[0].c);
    out.push(Check::exact("a_{n+1} = 3a_n - a_{n-1}, c likewise, n<=200", ANCHOR_GROWTH, recurrence));

    let growth = (homalg::big_ln(&seq[61].a)? - homalg::big_ln(&seq[60].a)?).exp();
    out.push(Check::at_most(
        "a_61/a_60 vs (3+sqrt5)/2",
        ANCHOR_GROWTH,
        (growth - homalg::lambda()).abs(),
        1e-6,
    ));
    Ok(out)
}

fn bns_suite(cfg: &VerifyConfig) -> Result<Vec<Check>> {
    let mut out = Vec::new();
    let x064 = fibering::parse_word(fibering::X064_RELATOR)?;
    out.push(Check::exact(
        "x064 exponent sums (0, 0)",
        ANCHOR_ABELIAN,
        fibering::exponent_sums(&x064) == (0, 0),
    ));
    let fibered = fibering::fibered_characters(&x064, 10)?;
    out.push(Check::new(
        "fibered characters of x064 with |p|,|q| <= 10",
        ANCHOR_BROWN,
        fibered.len() as f64,
        1.0,
        !fibered.is_empty(),
    ));
    let mut cyclic = true;
    let mut symmetric = true;
    for k in 0..100u64 {
        let w = Word::random(12, cfg.seed.wrapping_add(5000 + k)).cyclically_reduced();
        if w.is_empty() {
            continue;
        }
        for p in -3i64..=3 {
            for q in -3i64..=3 {
                let s = fibering::brown_status(&w, (p, q))?;
                for shift in 1..w.len() {
                    cyclic &= fibering::brown_status(&w.rotate(shift), (p, q))? == s;
                }
                let neg = fibering::brown_status(&w, (-p, -q))?;
                symmetric &= neg == s;
            }
        }
    }
    out.push(Check::exact("status invariant under cyclic permutation, 100 words", ANCHOR_BROWN, cyclic));
    out.push(Check::exact("status invariant under chi -> -chi", ANCHOR_BROWN, symmetric));
    let both = fibered
        .iter()
        .all(|c| fibering::brown_status(&x064, (c.p, c.q)) == Ok(BrownStatus::BothDirections) && c.is_primitive());
    out.push(Check::exact("listed characters are primitive and fibered", ANCHOR_BROWN, both));
    Ok(out)
}
