//! Real Gauss hypergeometric function ₂F₁(a, b; c; z) on `0 ≤ z < 1`.
//!
//! Small `z` uses the defining power series. Near `z = 1` the series decays
//! only like `zⁿ`, so when `c − a − b` is a positive integer `m` the
//! logarithmic connection formula in powers of `1 − z` is used instead.
//! Callers pass `1 − z` separately so it can be formed without cancellation.
//!
//! Note: ₂F₁(1/2, 1; 3/2; x²) = Σ x²ⁿ/(2n+1) = artanh(x)/x. The form
//! artanh(x²)/x that sometimes appears for this series is a misprint; the
//! series is what is implemented and tested here.

use statrs::function::gamma::{digamma, gamma};

const SERIES_REL_TOL: f64 = 1e-16;
const SERIES_MAX_TERMS: usize = 500;

/// Above this `z` the connection formula is used.
pub(crate) const SWITCH_Z: f64 = 0.8;

/// Direct power series. Converges geometrically for `|z| < 1`; returns the
/// partial sum after [`SERIES_MAX_TERMS`] terms if the stopping rule never
/// triggers.
pub(crate) fn series(a: f64, b: f64, c: f64, z: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..SERIES_MAX_TERMS {
        let n = n as f64;
        term *= (a + n) * (b + n) / ((c + n) * (n + 1.0)) * z;
        sum += term;
        if term.abs() < SERIES_REL_TOL * sum.abs() {
            break;
        }
    }
    sum
}

/// ₂F₁(a, b; a + b + m; z) for integer `m ≥ 1`, expanded about `z = 1`.
///
/// `a`, `b`, `a + m`, `b + m` must not be non-positive integers, except that
/// `1/Γ(a)` or `1/Γ(b)` vanishing is handled (the logarithmic part drops).
pub(crate) fn integer_gap(a: f64, b: f64, m: u32, one_minus_z: f64) -> f64 {
    let mf = m as f64;
    let c = a + b + mf;
    let w = one_minus_z;

    // Finite part: Γ(m)Γ(c)/(Γ(a+m)Γ(b+m)) Σ_{n<m} (a)_n (b)_n / (n! (1−m)_n) wⁿ.
    let pre_finite = gamma(mf) * gamma(c) / (gamma(a + mf) * gamma(b + mf));
    let mut finite = 0.0;
    let mut t = 1.0;
    for n in 0..m {
        finite += t;
        let n = n as f64;
        t *= (a + n) * (b + n) / ((n + 1.0) * (1.0 - mf + n)) * w;
    }
    finite *= pre_finite;

    let inv_gamma_ab = recip_gamma(a) * recip_gamma(b);
    if inv_gamma_ab == 0.0 || w == 0.0 {
        return finite;
    }

    // Logarithmic part:
    // −(z−1)^m Γ(c)/(Γ(a)Γ(b)) Σ (a+m)_n (b+m)_n / (n! (n+m)!) wⁿ
    //     × [ln w − ψ(n+1) − ψ(n+m+1) + ψ(a+n+m) + ψ(b+n+m)].
    let ln_w = w.ln();
    let mut psi_n1 = digamma(1.0);
    let mut psi_nm1 = digamma(mf + 1.0);
    let mut psi_anm = digamma(a + mf);
    let mut psi_bnm = digamma(b + mf);
    let mut coef = 1.0 / factorial(m);
    let mut sum = 0.0;
    for n in 0..SERIES_MAX_TERMS {
        let term = coef * (ln_w - psi_n1 - psi_nm1 + psi_anm + psi_bnm);
        sum += term;
        if term.abs() < SERIES_REL_TOL * sum.abs() && n > 2 {
            break;
        }
        let nf = n as f64;
        coef *= (a + mf + nf) * (b + mf + nf) / ((nf + 1.0) * (nf + mf + 1.0)) * w;
        psi_n1 += 1.0 / (nf + 1.0);
        psi_nm1 += 1.0 / (nf + mf + 1.0);
        psi_anm += 1.0 / (a + mf + nf);
        psi_bnm += 1.0 / (b + mf + nf);
    }
    let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
    finite - sign * w.powi(m as i32) * gamma(c) * inv_gamma_ab * sum
}

fn recip_gamma(x: f64) -> f64 {
    if x <= 0.0 && x.fract() == 0.0 {
        0.0
    } else {
        1.0 / gamma(x)
    }
}

fn factorial(m: u32) -> f64 {
    (1..=m).map(f64::from).product()
}

/// ₂F₁(a, b; a + b + m; z) choosing the branch by `z`.
pub(crate) fn eval_integer_gap(a: f64, b: f64, m: u32, z: f64, one_minus_z: f64) -> f64 {
    if z <= SWITCH_Z {
        series(a, b, a + b + m as f64, z)
    } else {
        integer_gap(a, b, m, one_minus_z)
    }
}
