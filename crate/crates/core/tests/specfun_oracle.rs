use std::f64::consts::PI;

use hypnorm::specfun::{self, EvalPath, RadialMode};

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

// (ℓ, r, ψ_ℓ(r), ψ_ℓ′(r)) from a 40-digit evaluation of the hypergeometric
// representation.
const HIGHER_MODES: [(u32, f64, f64, f64); 16] = [
    (2, 0.3, 0.035241344577046263737, 0.22996851946071562978),
    (2, 1.5, 0.56514451700133189684, 0.44873568538746893065),
    (2, 4.0, 0.98790442452750089825, 0.020198065313788250496),
    (2, 12.0, 0.99999999501682240076, 9.5133390546616807533e-9),
    (3, 0.3, 0.0059900581354795967458, 0.058716167262096218724),
    (3, 1.5, 0.39999895548059588224, 0.49291645513749843114),
    (3, 4.0, 0.97846842432195231426, 0.035117202918125090813),
    (3, 12.0, 0.99999999033565556395, 1.8422656586639612555e-8),
    (4, 0.3, 0.00099024700749013614775, 0.012953995886785524497),
    (4, 1.5, 0.27760991817112447868, 0.46648953639279062992),
    (4, 4.0, 0.9674193894919279286, 0.051998754590857245351),
    (4, 12.0, 0.99999998427027272523, 2.994940074510163516e-8),
    (6, 0.3, 0.000025766954630242593953, 0.0005061613972416416015),
    (6, 1.5, 0.12886209679603089356, 0.33399050077334090615),
    (6, 4.0, 0.94165868792509065234, 0.089448115570290193558),
    (6, 12.0, 0.99999996813031414887, 6.0568258739077265341e-8),
];

#[test]
fn higher_modes_match_high_precision_values() {
    for &(ell, r, psi, dpsi) in &HIGHER_MODES {
        assert!(rel(specfun::psi(ell, r).unwrap(), psi) < 1e-12, "psi_{ell}({r})");
        assert!(rel(specfun::dpsi(ell, r).unwrap(), dpsi) < 1e-10, "dpsi_{ell}({r})");
    }
}

#[test]
fn first_mode_high_precision_values() {
    assert!(rel(specfun::psi(1, 0.5).unwrap(), 0.322606225323068210879) < 1e-13);
    assert!(rel(specfun::psi(1, 1.0).unwrap(), 0.58897362453302083723) < 1e-13);
}

#[test]
fn nu_high_precision_values() {
    let table = [
        (0.5, 0.498499049801911365674),
        (1.0, 3.47528370389632227415),
        (2.0, 17.9323053508567611350),
        (30.0, 546.637121724624023492),
    ];
    for (r, v) in table {
        assert!(rel(specfun::nu(r).unwrap(), v) < 1e-11, "nu({r})");
        assert!(rel(specfun::nu_closed_form(r).unwrap(), v) < 1e-13, "closed nu({r})");
    }
}

/// Residual of `ψ″ + 2 coth r ψ′ − ℓ(ℓ+1) ψ / sinh² r` with `ψ″` from a
/// central difference of `ψ′`.
fn ode_residual(ell: u32, r: f64) -> f64 {
    let h = 1e-5 * r.max(1.0);
    let d2 = (specfun::dpsi(ell, r + h).unwrap() - specfun::dpsi(ell, r - h).unwrap()) / (2.0 * h);
    let l = f64::from(ell);
    let s = r.sinh();
    d2 + 2.0 / r.tanh() * specfun::dpsi(ell, r).unwrap() - l * (l + 1.0) * specfun::psi(ell, r).unwrap() / (s * s)
}

#[test]
fn modes_solve_the_radial_laplace_equation() {
    for ell in 1..=6 {
        for &r in &[0.2, 0.7, 1.5, 3.0, 6.0] {
            let scale = specfun::psi(ell, r).unwrap() / r.sinh().powi(2) + specfun::dpsi(ell, r).unwrap();
            assert!(ode_residual(ell, r).abs() < 1e-6 * scale.max(1e-3), "ell={ell} r={r}");
        }
    }
}

#[test]
fn modes_tend_to_one() {
    for ell in 1..=8 {
        let v = specfun::psi(ell, 40.0).unwrap();
        assert!((v - 1.0).abs() < 1e-12, "ell={ell}: {v}");
    }
}

#[test]
fn psi_one_taylor_branch() {
    // ψ₁ = (2/3) r − (4/45) r³ + …
    for &r in &[1e-4f64, 1e-3, 1e-2] {
        let t = 2.0 / 3.0 * r - 4.0 / 45.0 * r.powi(3);
        assert!(rel(specfun::psi(1, r).unwrap(), t) < r.powi(4).max(1e-15));
    }
}

#[test]
fn mode_norm_equals_nu_over_three_pi() {
    for &r in &[0.5, 1.0, 2.0] {
        let n = specfun::mode_norm(1, r).unwrap();
        assert!(rel(3.0 * PI * n, specfun::nu(r).unwrap()) < 1e-9, "r={r}");
    }
}

/// Green's identity: `N_ℓ(r) = ψ_ℓ(r) ψ_ℓ′(r) sinh² r` for harmonic Ψ.
#[test]
fn mode_norm_matches_boundary_flux() {
    for ell in 1..=5 {
        for &r in &[0.3, 1.0, 2.5, 8.0] {
            let flux = specfun::psi(ell, r).unwrap() * specfun::dpsi(ell, r).unwrap() * r.sinh().powi(2);
            assert!(rel(specfun::mode_norm(ell, r).unwrap(), flux) < 1e-9, "ell={ell} r={r}");
        }
    }
}

#[test]
fn mode_norm_vanishes_at_order_two_ell_plus_one() {
    for ell in 1..=4u32 {
        let (a, b) = (1e-2, 2e-2);
        let ratio = specfun::mode_norm(ell, b).unwrap() / specfun::mode_norm(ell, a).unwrap();
        let expected = 2f64.powi(2 * ell as i32 + 1);
        assert!(rel(ratio, expected) < 1e-2, "ell={ell}: {ratio}");
    }
}

#[test]
fn mode_norm_at_large_radius() {
    // For r ≫ 1 the flux ψ₁ψ₁′ sinh² r = (r coth r − 1)(coth r − r csch² r) → r − 1.
    let v = specfun::mode_norm(1, 20.0).unwrap();
    assert!(rel(v, 38.0) < 1e-9, "{v}");
}

#[test]
fn nu_small_radius_asymptotic() {
    let r = 1e-3;
    let q = specfun::nu(r).unwrap() / (4.0 * PI / 3.0 * r.powi(3));
    assert!((q - 1.0).abs() < 0.01);
}

#[test]
fn nu_large_radius_grows_like_six_pi_r_minus_one() {
    // ν(r) = 6π(r coth r − 1)(coth r − r csch² r) ~ 6π(r − 1).
    for &r in &[30.0, 100.0, 300.0] {
        let v = specfun::nu(r).unwrap();
        assert!(rel(v, 6.0 * PI * (r - 1.0)) < 1e-10, "r={r}");
    }
    // Hence ν(r)/(6πr) → 1 only like 1 − 1/r.
    let q = specfun::nu(30.0).unwrap() / (6.0 * PI * 30.0);
    assert!((q - 29.0 / 30.0).abs() < 1e-12);
}

#[test]
fn integrand_identity_on_grid() {
    for i in 0..=200 {
        let rho = 1e-2 * (2000f64).powf(i as f64 / 200.0);
        let p1 = specfun::psi(1, rho).unwrap();
        let d1 = specfun::dpsi(1, rho).unwrap();
        let lhs = 3.0 * PI * (d1 * d1 * rho.sinh().powi(2) + 2.0 * p1 * p1);
        let rhs = 6.0 * PI * specfun::nu_integrand(rho);
        assert!((lhs - rhs).abs() < 1e-10 * rhs, "rho={rho}: {lhs} vs {rhs}");
    }
}

#[test]
fn nu_is_increasing_on_log_grid() {
    let mut prev = 0.0;
    for i in 0..=120 {
        let r = 1e-3 * (3e4f64).powf(i as f64 / 120.0);
        let v = specfun::nu(r).unwrap();
        assert!(v > prev, "r={r}");
        prev = v;
    }
}

#[test]
fn branch_constants() {
    let thin = (0.29 / specfun::nu(0.145).unwrap()).sqrt();
    assert!((thin - 4.78).abs() < 0.01, "{thin}");
    let mut worst: f64 = 0.0;
    for i in 0..=500 {
        let eps = 0.145 * (50.0f64 / 0.145).powf(i as f64 / 500.0);
        worst = worst.max((eps / specfun::nu(eps).unwrap()).sqrt());
    }
    assert!(worst < 3.5, "{worst}");
}

#[test]
fn closed_form_for_constant_mode() {
    let m = RadialMode::new(0, EvalPath::ClosedForm).unwrap();
    assert_eq!(m.value(3.0).unwrap(), 1.0);
    assert_eq!(m.derivative(3.0).unwrap(), 0.0);
}
