//! Adaptive quadrature on finite intervals: Gauss–Kronrod 15/7 pairs with
//! bisection, falling back to adaptive Simpson when the Kronrod tree fails
//! to converge within the depth budget.

use thiserror::Error;

/// Tolerances and recursion budget for adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSettings {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: u32,
}

impl Default for QuadratureSettings {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_depth: 60,
        }
    }
}

impl QuadratureSettings {
    pub fn new(abs_tol: f64, rel_tol: f64, max_depth: u32) -> Result<Self, QuadratureError> {
        if abs_tol.is_nan()
            || abs_tol <= 0.0
            || rel_tol.is_nan()
            || rel_tol <= 0.0
            || max_depth < 10
        {
            return Err(QuadratureError::InvalidSettings {
                abs_tol,
                rel_tol,
                max_depth,
            });
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_depth,
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuadratureError {
    #[error("tolerances must be > 0 and max_depth >= 10 (abs={abs_tol}, rel={rel_tol}, depth={max_depth})")]
    InvalidSettings {
        abs_tol: f64,
        rel_tol: f64,
        max_depth: u32,
    },
    #[error("integration bounds [{a}, {b}] are not a finite ordered interval")]
    InvalidInterval { a: f64, b: f64 },
    #[error("quadrature did not converge on [{a}, {b}]: error {err:.3e} > tolerance {tol:.3e} at depth {depth}")]
    NoConvergence {
        a: f64,
        b: f64,
        err: f64,
        tol: f64,
        depth: u32,
    },
}

/// Integral value together with the summed per-panel error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error: f64,
}

// 15-point Kronrod abscissae (positive half, descending) and weights, with
// the embedded 7-point Gauss weights. Standard QUADPACK values.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_33,
    0.949_107_912_342_758_524_526_189_684_047_85,
    0.864_864_423_359_769_072_789_712_788_640_93,
    0.741_531_185_599_394_439_863_864_773_280_79,
    0.586_087_235_467_691_130_294_144_838_258_73,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.0,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_97,
    0.417_959_183_673_469_387_755_102_040_816_33,
];

/// One Gauss–Kronrod 15/7 panel: returns the K15 estimate and |K15 - G7|.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);

    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let fsum = f(center - dx) + f(center + dx);
        kronrod += WGK[j] * fsum;
        if j % 2 == 1 {
            gauss += WG[j / 2] * fsum;
        }
    }
    kronrod *= half;
    gauss *= half;
    (kronrod, (kronrod - gauss).abs())
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    depth: u32,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err && self.a == other.a
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
        // Max-heap by error estimate; ties broken by position so the
        // refinement order (and hence the float result) is deterministic.
        self.err
            .total_cmp(&other.err)
            .then(other.a.total_cmp(&self.a))
    }
}

/// Globally adaptive Gauss–Kronrod: repeatedly bisect the panel with the
/// largest error estimate until the summed estimate meets the tolerance.
fn gk_adaptive<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    settings: &QuadratureSettings,
) -> Result<QuadResult, QuadratureError> {
    let mut heap = std::collections::BinaryHeap::new();
    let (value, err) = gk15(f, a, b);
    heap.push(Panel {
        a,
        b,
        value,
        err,
        depth: 0,
    });
    let mut total_value = value;
    let mut total_err = err;
    loop {
        let tol = settings.abs_tol.max(settings.rel_tol * total_value.abs());
        if total_err <= tol {
            break;
        }
        let worst = heap.pop().expect("heap holds at least one panel");
        if worst.depth >= settings.max_depth {
            return Err(QuadratureError::NoConvergence {
                a: worst.a,
                b: worst.b,
                err: total_err,
                tol,
                depth: worst.depth,
            });
        }
        let mid = 0.5 * (worst.a + worst.b);
        let (lv, le) = gk15(f, worst.a, mid);
        let (rv, re) = gk15(f, mid, worst.b);
        total_value += lv + rv - worst.value;
        total_err += le + re - worst.err;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            value: lv,
            err: le,
            depth: worst.depth + 1,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            value: rv,
            err: re,
            depth: worst.depth + 1,
        });
    }
    // Re-sum in interval order for a rounding pattern independent of the
    // refinement history bookkeeping.
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_unstable_by(|x, y| x.a.total_cmp(&y.a));
    let value = panels.iter().map(|p| p.value).sum::<f64>();
    let abs_error = panels.iter().map(|p| p.err).sum::<f64>();
    Ok(QuadResult { value, abs_error })
}

fn simpson_panel<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
    let m = 0.5 * (a + b);
    let fm = f(m);
    ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
}

#[allow(clippy::too_many_arguments)]
fn simpson_refine<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    whole: f64,
    m: f64,
    fm: f64,
    tol: f64,
    depth_left: u32,
) -> Result<QuadResult, QuadratureError> {
    let (left, lm, flm) = simpson_panel(f, a, fa, m, fm);
    let (right, rm, frm) = simpson_panel(f, m, fm, b, fb);
    let err = (left + right - whole).abs() / 15.0;
    if err <= tol {
        return Ok(QuadResult {
            value: left + right + (left + right - whole) / 15.0,
            abs_error: err,
        });
    }
    if depth_left == 0 {
        return Err(QuadratureError::NoConvergence {
            a,
            b,
            err,
            tol,
            depth: 0,
        });
    }
    let l = simpson_refine(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth_left - 1)?;
    let r = simpson_refine(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth_left - 1)?;
    Ok(QuadResult {
        value: l.value + r.value,
        abs_error: l.abs_error + r.abs_error,
    })
}

/// Adaptive integral of `f` over the finite interval `[a, b]`.
///
/// Converges when the summed panel error estimate drops below
/// `max(abs_tol, rel_tol · |I|)`, where `|I|` comes from a first
/// whole-interval pass.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    settings: &QuadratureSettings,
) -> Result<QuadResult, QuadratureError> {
    if !a.is_finite() || !b.is_finite() || a > b {
        return Err(QuadratureError::InvalidInterval { a, b });
    }
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            abs_error: 0.0,
        });
    }
    match gk_adaptive(&f, a, b, settings) {
        Ok(r) => Ok(r),
        Err(gk_failure) => {
            // Simpson fallback with the same budget.
            let (rough, _) = gk15(&f, a, b);
            let tol = settings.abs_tol.max(settings.rel_tol * rough.abs());
            let fa = f(a);
            let fb = f(b);
            let (whole, m, fm) = simpson_panel(&f, a, fa, b, fb);
            simpson_refine(&f, a, fa, b, fb, whole, m, fm, tol, settings.max_depth)
                .map_err(|_| gk_failure)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn settings_validation() {
        assert!(QuadratureSettings::new(1e-10, 1e-10, 60).is_ok());
        assert!(QuadratureSettings::new(0.0, 1e-10, 60).is_err());
        assert!(QuadratureSettings::new(1e-10, -1.0, 60).is_err());
        assert!(QuadratureSettings::new(1e-10, 1e-10, 5).is_err());
    }

    #[test]
    fn polynomial_is_exact() {
        let s = QuadratureSettings::default();
        let r = integrate(|x| x * x * x - 2.0 * x + 1.0, 0.0, 2.0, &s).unwrap();
        // ∫_0^2 (x^3 - 2x + 1) dx = 4 - 4 + 2 = 2
        assert_relative_eq!(r.value, 2.0, max_relative = 1e-14);
    }

    #[test]
    fn smooth_exponential() {
        let s = QuadratureSettings::default();
        let r = integrate(|x| x.exp(), 0.0, 1.0, &s).unwrap();
        assert_relative_eq!(r.value, std::f64::consts::E - 1.0, max_relative = 1e-13);
        assert!(r.abs_error <= 1e-10);
    }

    #[test]
    fn integrable_endpoint_singularity() {
        let s = QuadratureSettings::new(1e-9, 1e-9, 60).unwrap();
        // ∫_0^1 dx/√x = 2; the endpoint is never evaluated by the open rule.
        let r = integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, &s).unwrap();
        assert_relative_eq!(r.value, 2.0, max_relative = 1e-8);
    }

    #[test]
    fn oscillatory_against_closed_form() {
        let s = QuadratureSettings::default();
        let r = integrate(|x| (10.0 * x).sin(), 0.0, 3.0, &s).unwrap();
        let exact = (1.0 - (30.0f64).cos()) / 10.0;
        assert_relative_eq!(r.value, exact, max_relative = 1e-12);
    }

    #[test]
    fn reports_non_convergence() {
        let s = QuadratureSettings::new(1e-13, 1e-13, 10).unwrap();
        // 1/x on (0, 1] diverges; the budget must run out loudly.
        let out = integrate(|x| 1.0 / x, 0.0, 1.0, &s);
        assert!(matches!(out, Err(QuadratureError::NoConvergence { .. })));
    }

    #[test]
    fn degenerate_and_invalid_intervals() {
        let s = QuadratureSettings::default();
        let r = integrate(|x| x, 2.0, 2.0, &s).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(integrate(|x| x, 1.0, 0.0, &s).is_err());
        assert!(integrate(|x| x, f64::NEG_INFINITY, 0.0, &s).is_err());
    }

    #[test]
    fn error_estimate_bounds_true_error() {
        let s = QuadratureSettings::default();
        let r = integrate(|x| (-x * x).exp() * (5.0 * x).cos(), 0.0, 4.0, &s).unwrap();
        // Cross-check against a run at a much tighter tolerance.
        let tight = QuadratureSettings::new(1e-13, 1e-13, 60).unwrap();
        let r2 = integrate(|x| (-x * x).exp() * (5.0 * x).cos(), 0.0, 4.0, &tight).unwrap();
        assert!((r.value - r2.value).abs() <= r.abs_error.max(1e-12));
    }
}
