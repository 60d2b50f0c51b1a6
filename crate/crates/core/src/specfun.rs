//! Special functions backing the closed-form Gini expressions: modified
//! Bessel functions I₀ and I₁, the Gauss hypergeometric ₂F₁(1,n;n+1;z),
//! and log-gamma.
//!
//! Everything here is a plain power series or a Lanczos approximation in
//! double precision. Arguments are restricted to the ranges the library
//! actually uses (Bessel arguments stay below 40 at the supported rate
//! grid); out-of-range input is a loud domain error rather than a silent
//! loss of precision.

use thiserror::Error;

/// Largest Bessel argument accepted by [`bessel_i0`] / [`bessel_i1`].
///
/// The plain ascending series holds ≤1e-13 relative error on [0, 40] in
/// f64; there is no asymptotic large-x branch behind it.
pub const BESSEL_MAX_ARG: f64 = 40.0;

/// Series terms stop once the next term drops below this fraction of the
/// partial sum.
const SERIES_EPS: f64 = 1e-16;

const BESSEL_MAX_TERMS: u32 = 500;
const HYP2F1_MAX_TERMS: u32 = 10_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpecFunError {
    #[error("bessel_i{order}: argument {arg} outside [0, {BESSEL_MAX_ARG}]")]
    BesselDomain { order: u8, arg: f64 },
    #[error("gauss_2f1_1n: z = {z} outside [0, 1)")]
    HypergeometricDomain { z: f64 },
    #[error("gauss_2f1_1n: n must be >= 1")]
    HypergeometricOrder,
    #[error("ln_gamma: argument {arg} must be finite and > 0")]
    LnGammaDomain { arg: f64 },
    #[error("{func}: series did not converge within {terms} terms")]
    NoConvergence { func: &'static str, terms: u32 },
}

/// Outcome of a truncated series evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpecFunResult {
    pub value: f64,
    /// Number of series terms accumulated (≥ 1; the leading term counts).
    pub terms_used: u32,
    /// True iff the last term's magnitude fell below `1e-16 · |value|`.
    pub converged: bool,
}

/// Modified Bessel function of the first kind, order zero:
/// I₀(x) = Σ_{k≥0} (x/2)^{2k} / (k!)².
pub fn bessel_i0(x: f64) -> Result<SpecFunResult, SpecFunError> {
    if !x.is_finite() || !(0.0..=BESSEL_MAX_ARG).contains(&x) {
        return Err(SpecFunError::BesselDomain { order: 0, arg: x });
    }
    let out = i0_series(x);
    if !out.converged {
        return Err(SpecFunError::NoConvergence {
            func: "bessel_i0",
            terms: out.terms_used,
        });
    }
    Ok(out)
}

/// Modified Bessel function of the first kind, order one:
/// I₁(x) = Σ_{k≥0} (x/2)^{2k+1} / (k! (k+1)!).
pub fn bessel_i1(x: f64) -> Result<SpecFunResult, SpecFunError> {
    if !x.is_finite() || !(0.0..=BESSEL_MAX_ARG).contains(&x) {
        return Err(SpecFunError::BesselDomain { order: 1, arg: x });
    }
    let out = i1_series(x);
    if !out.converged {
        return Err(SpecFunError::NoConvergence {
            func: "bessel_i1",
            terms: out.terms_used,
        });
    }
    Ok(out)
}

/// ₂F₁(1, n; n+1; z) = Σ_{k≥0} [n/(n+k)] z^k for n ≥ 1 and 0 ≤ z < 1.
///
/// This is the only hypergeometric case the library needs; the specialized
/// series is positive and monotone, so plain accumulation is stable.
pub fn gauss_2f1_1n(n: u32, z: f64) -> Result<SpecFunResult, SpecFunError> {
    if n < 1 {
        return Err(SpecFunError::HypergeometricOrder);
    }
    if !z.is_finite() || !(0.0..1.0).contains(&z) {
        return Err(SpecFunError::HypergeometricDomain { z });
    }
    let nf = f64::from(n);
    let mut sum = 1.0; // k = 0 term
    let mut zk = 1.0;
    let mut terms = 1u32;
    let mut converged = z == 0.0;
    for k in 1..HYP2F1_MAX_TERMS {
        zk *= z;
        let term = nf / (nf + f64::from(k)) * zk;
        sum += term;
        terms += 1;
        if term < SERIES_EPS * sum {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(SpecFunError::NoConvergence {
            func: "gauss_2f1_1n",
            terms,
        });
    }
    Ok(SpecFunResult {
        value: sum,
        terms_used: terms,
        converged,
    })
}

// Lanczos g=7, 9-coefficient table (GSL / Numerical Recipes lineage).
const LANCZOS_G: f64 = 7.0;
#[allow(clippy::excessive_precision)]
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// ln Γ(x) for x > 0 via the Lanczos approximation (no reflection branch;
/// the domain is restricted to positive arguments).
pub fn ln_gamma(x: f64) -> Result<f64, SpecFunError> {
    if !x.is_finite() || x <= 0.0 {
        return Err(SpecFunError::LnGammaDomain { arg: x });
    }
    let z = x - 1.0;
    let mut acc = LANCZOS_COEFFS[0];
    for (i, c) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        acc += c / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    let half_ln_2pi = 0.5 * (2.0 * std::f64::consts::PI).ln();
    Ok(half_ln_2pi + (z + 0.5) * t.ln() - t + acc.ln())
}

/// Series engine for I₀. Domain is the caller's responsibility.
pub(crate) fn i0_series(x: f64) -> SpecFunResult {
    debug_assert!((0.0..=BESSEL_MAX_ARG).contains(&x));
    let q = 0.25 * x * x;
    let mut term = 1.0;
    let mut sum = 1.0;
    let mut terms = 1u32;
    let mut converged = false;
    for k in 1..BESSEL_MAX_TERMS {
        let kf = f64::from(k);
        term *= q / (kf * kf);
        sum += term;
        terms += 1;
        if term < SERIES_EPS * sum {
            converged = true;
            break;
        }
    }
    SpecFunResult {
        value: sum,
        terms_used: terms,
        converged,
    }
}

/// Series engine for I₁. Domain is the caller's responsibility.
pub(crate) fn i1_series(x: f64) -> SpecFunResult {
    debug_assert!((0.0..=BESSEL_MAX_ARG).contains(&x));
    if x == 0.0 {
        // Odd function; the series has no constant term.
        return SpecFunResult {
            value: 0.0,
            terms_used: 1,
            converged: true,
        };
    }
    let q = 0.25 * x * x;
    let mut term = 0.5 * x;
    let mut sum = term;
    let mut terms = 1u32;
    let mut converged = false;
    for k in 1..BESSEL_MAX_TERMS {
        let kf = f64::from(k);
        term *= q / (kf * (kf + 1.0));
        sum += term;
        terms += 1;
        if term < SERIES_EPS * sum {
            converged = true;
            break;
        }
    }
    SpecFunResult {
        value: sum,
        terms_used: terms,
        converged,
    }
}
