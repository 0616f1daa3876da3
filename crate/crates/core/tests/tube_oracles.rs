use std::f64::consts::PI;
use std::num::NonZeroUsize;

use gauss_quad::GaussLegendre;
use hypnorm::tubefield::{self, TubeChart, COMPETITOR_STEPS, DEFAULT_ORDER};

fn radial_integral<F: Fn(f64) -> f64>(f: F, depth: f64) -> f64 {
    // Composite 64-point rule over 8 panels.
    let rule = GaussLegendre::new(NonZeroUsize::new(64).unwrap());
    let panels = 8;
    let h = depth / panels as f64;
    (0..panels).map(|k| rule.integrate(k as f64 * h, (k + 1) as f64 * h, &f)).sum()
}

fn charts() -> Vec<TubeChart> {
    let mut v = Vec::new();
    for &eps in &[0.01, 0.1, 0.29, 1.0] {
        for &depth in &[0.05, 0.5, 2.0, 6.0] {
            v.push(TubeChart::new(eps, depth, 1.3).unwrap());
        }
    }
    v
}

#[test]
fn volume_matches_radial_integral() {
    for t in charts() {
        let oracle = radial_integral(|r| 2.0 * PI * t.epsilon() * r.sinh() * r.cosh(), t.depth());
        let v = tubefield::tube_volume(&t);
        assert!((v - oracle).abs() < 1e-12 * oracle, "{t:?}");
        let q = tubefield::tube_volume_quadrature(&t, DEFAULT_ORDER).unwrap();
        assert!((q - oracle).abs() < 1e-9 * oracle, "{t:?}");
    }
}

#[test]
fn form_norm_matches_radial_integral() {
    for t in charts() {
        // |dz/ε|² √g integrated over θ and z: 2π ε tanh r / ε².
        let oracle = radial_integral(|r| 2.0 * PI / t.epsilon() * r.tanh(), t.depth());
        let n = tubefield::tube_form_norm(&t);
        assert!((n * n - oracle).abs() < 1e-12 * oracle, "{t:?}");
        let q = tubefield::tube_form_norm_sq_quadrature(&t, DEFAULT_ORDER).unwrap();
        assert!((q - oracle).abs() < 1e-9 * oracle, "{t:?}");
    }
}

#[test]
fn thin_tube_limit() {
    let t = TubeChart::new(0.2, 1e-4, 0.0).unwrap();
    let n2 = tubefield::tube_form_norm(&t).powi(2);
    let approx = PI * 1e-8 / 0.2;
    assert!((n2 - approx).abs() < 1e-6 * approx);
}

#[test]
fn deep_tube_does_not_overflow() {
    let t = TubeChart::new(0.5, 800.0, 0.0).unwrap();
    let n = tubefield::tube_form_norm(&t);
    let expected = (2.0 * PI / 0.5 * (800.0 - 2f64.ln())).sqrt();
    assert!((n - expected).abs() < 1e-12 * expected);
}

#[test]
fn twist_does_not_change_integrals() {
    let a = TubeChart::new(0.3, 1.5, 0.0).unwrap();
    let b = TubeChart::new(0.3, 1.5, 4.0).unwrap();
    assert_eq!(tubefield::tube_volume(&a), tubefield::tube_volume(&b));
    assert_eq!(tubefield::tube_form_norm(&a), tubefield::tube_form_norm(&b));
}

#[test]
fn competitors_never_beat_invariant_form() {
    for t in charts() {
        let rep = tubefield::tube_lower_bound_checked(&t, 32).unwrap();
        assert!(rep.minimal, "{t:?}");
        assert_eq!(rep.competitors.len(), COMPETITOR_STEPS.len());
        assert!((rep.bound - tubefield::tube_form_norm(&t)).abs() < 1e-15 * rep.bound);
    }
}

#[test]
fn competitor_excess_is_quadratic() {
    // The cross term vanishes by z-periodicity, so ‖dz/ε + s dh‖² − ‖dz/ε‖² ∝ s².
    let t = TubeChart::new(0.29, 2.0, 0.0).unwrap();
    let c = tubefield::verify_tube_minimality(&t, &[0.1, 0.01, -0.1], 32).unwrap();
    let excess: Vec<f64> = c.iter().map(|x| x.norm * x.norm - x.baseline * x.baseline).collect();
    assert!((excess[0] / excess[1] - 100.0).abs() < 1e-6, "{excess:?}");
    assert!((excess[0] - excess[2]).abs() < 1e-10 * excess[0]);
}

#[test]
fn invariant_form_is_harmonic_with_unit_period() {
    for t in charts() {
        let eps = t.epsilon();
        let alpha = move |_r: f64, _th: f64, _z: f64| [0.0, 0.0, 1.0 / eps];
        let (closed, coclosed) = tubefield::harmonic_residuals(&t, &alpha, 5, 1e-5);
        assert!(closed < 1e-10 && coclosed < 1e-10, "{t:?}: {closed} {coclosed}");
        assert!((tubefield::core_period(&t, &alpha).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn residuals_detect_non_harmonic_forms() {
    let t = TubeChart::new(0.29, 1.0, 0.0).unwrap();
    // dr: closed, but d*dr = ∂_r(sinh r cosh r) = cosh 2r.
    let dr = |_r: f64, _th: f64, _z: f64| [1.0, 0.0, 0.0];
    let (closed, coclosed) = tubefield::harmonic_residuals(&t, &dr, 4, 1e-5);
    assert!(closed < 1e-10 && coclosed > 1.0);
    // r dθ: coclosed, but d(r dθ) = dr∧dθ.
    let rdth = |r: f64, _th: f64, _z: f64| [0.0, r, 0.0];
    let (closed, coclosed) = tubefield::harmonic_residuals(&t, &rdth, 4, 1e-5);
    assert!((closed - 1.0).abs() < 1e-8 && coclosed < 1e-10);
    // z dz has no unit period: ∫ z dz over [0, ε] is ε²/2.
    let zdz = |_r: f64, _th: f64, z: f64| [0.0, 0.0, z];
    assert!((tubefield::core_period(&t, &zdz).unwrap() - 0.29 * 0.29 / 2.0).abs() < 1e-14);
}

#[test]
fn remark_ratio_closed_form() {
    // On the unit-volume tube cosh²R = 1 + 1/(πε), so
    // ratio = 1/√(πε ln(1 + 1/(πε))).
    for k in 0..=40 {
        let eps = 10f64.powf(-6.0 + 4.0 * k as f64 / 40.0);
        let r = tubefield::remark_ratio(eps).unwrap();
        let oracle = 1.0 / (PI * eps * (1.0 / (PI * eps)).ln_1p()).sqrt();
        assert!((r.ratio - oracle).abs() < 1e-10 * oracle, "eps={eps}");
        let v = TubeChart::new(eps, r.depth, 0.0).unwrap();
        assert!((tubefield::tube_volume(&v) - 1.0).abs() < 1e-10);
    }
}

#[test]
fn remark_ratio_band_and_monotonicity() {
    let mut prev = 0.0;
    for k in 0..=40 {
        let eps = 10f64.powf(-6.0 + 4.0 * k as f64 / 40.0);
        let r = tubefield::remark_ratio(eps).unwrap();
        let q = r.ratio / r.predicted;
        assert!((0.58..=0.65).contains(&q), "eps={eps}: {q}");
        assert!(q > prev, "eps={eps}");
        prev = q;
    }
    // Increasing in ε, tending to 1/√π as ε → 0.
    let r = tubefield::remark_ratio(1e-200).unwrap();
    assert!((r.ratio / r.predicted - 1.0 / PI.sqrt()).abs() < 5e-3);
}

#[test]
fn remark_ratio_rejects_bad_lengths() {
    assert!(tubefield::remark_ratio(0.0).is_err());
    assert!(tubefield::remark_ratio(0.5).is_err());
}
