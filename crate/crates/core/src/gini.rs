//! Sample-side Gini machinery: the pairwise mean-difference estimator (with
//! the binom(n,2) divisor) and the generic CDF-based population Gini
//! ∫ F(1−F) dx / μ (or its series form on {0,1,…}).

use thiserror::Error;

use crate::distributions::Sample;
use crate::quad::{integrate, QuadratureError, QuadratureSettings};

/// The Gini estimate for a sample.
///
/// `degenerate` marks the all-zero case, where the statistic is defined as
/// exactly zero rather than 0/0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GiniEstimate {
    pub value: f64,
    pub n: usize,
    pub degenerate: bool,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GiniError {
    #[error("population mean must be > 0, got {0}")]
    NonPositiveMean(f64),
    #[error("truncation/upper limit must be finite and >= 0, got {0}")]
    InvalidUpper(f64),
    #[error(transparent)]
    Quadrature(#[from] QuadratureError),
}

/// Support type for [`gini_from_cdf`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support {
    /// Lattice {0, 1, 2, …}: the characterization becomes Σ F(k)(1−F(k))/μ.
    Discrete,
    /// Nonnegative reals: ∫₀^upper F(x)(1−F(x)) dx / μ.
    Continuous,
}

/// Both estimator paths divide the pair sum by the same constant.
fn pair_count(n: usize) -> f64 {
    (n as f64) * (n as f64 - 1.0) / 2.0
}

/// Neumaier-compensated sum; the rank formula accumulates O(n) terms of
/// mixed sign.
pub(crate) fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Pairwise Gini estimator via the sorted O(n log n) rank formula
/// Σ_{i<j}|x_i−x_j| = Σ_i (2i−n−1)·x_(i) (1-based ranks over sorted
/// values; ties are kept as duplicates).
pub fn estimate_gini(sample: &Sample) -> GiniEstimate {
    let n = sample.len();
    let total = sample.total();
    if total == 0.0 {
        return GiniEstimate {
            value: 0.0,
            n,
            degenerate: true,
        };
    }
    let mut sorted = sample.values().to_vec();
    sorted.sort_unstable_by(f64::total_cmp);
    let nf = n as f64;
    let pair_sum = neumaier_sum(
        sorted
            .iter()
            .enumerate()
            .map(|(i, &x)| (2.0 * (i as f64 + 1.0) - nf - 1.0) * x),
    );
    let mean = total / nf;
    GiniEstimate {
        value: (pair_sum / pair_count(n)) / (2.0 * mean),
        n,
        degenerate: false,
    }
}

/// Reference implementation over all binom(n,2) pairs; O(n²).
pub fn estimate_gini_naive(sample: &Sample) -> GiniEstimate {
    let n = sample.len();
    let values = sample.values();
    let total = sample.total();
    if total == 0.0 {
        return GiniEstimate {
            value: 0.0,
            n,
            degenerate: true,
        };
    }
    let mut pair_sum = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            pair_sum += (values[i] - values[j]).abs();
        }
    }
    let mean = total / n as f64;
    GiniEstimate {
        value: (pair_sum / pair_count(n)) / (2.0 * mean),
        n,
        degenerate: false,
    }
}

/// Population Gini from an arbitrary CDF: Σ_{k=0}^{⌊upper⌋} F(k)(1−F(k))/μ
/// on the lattice, or adaptive quadrature of F(1−F) on [0, upper] divided
/// by μ. `upper` must be chosen so the truncated tail is negligible.
pub fn gini_from_cdf<F: Fn(f64) -> f64>(
    cdf: F,
    mean: f64,
    support: Support,
    upper: f64,
) -> Result<f64, GiniError> {
    if mean.is_nan() || mean <= 0.0 {
        return Err(GiniError::NonPositiveMean(mean));
    }
    if !upper.is_finite() || upper < 0.0 {
        return Err(GiniError::InvalidUpper(upper));
    }
    match support {
        Support::Discrete => {
            let k_max = upper.floor() as u64;
            let sum = neumaier_sum((0..=k_max).map(|k| {
                let f = cdf(k as f64);
                f * (1.0 - f)
            }));
            Ok(sum / mean)
        }
        Support::Continuous => {
            let settings = QuadratureSettings::default();
            let integral = integrate(
                |x| {
                    let f = cdf(x);
                    f * (1.0 - f)
                },
                0.0,
                upper,
                &settings,
            )?;
            Ok(integral.value / mean)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::DistributionModel;
    use approx::assert_relative_eq;

    fn sample(values: &[f64]) -> Sample {
        Sample::new(values.to_vec()).unwrap()
    }

    #[test]
    fn equal_values_give_zero() {
        let e = estimate_gini(&sample(&[5.0, 5.0, 5.0]));
        assert_eq!(e.value, 0.0);
        assert!(!e.degenerate);
    }

    #[test]
    fn all_zero_sample_is_degenerate_zero() {
        let e = estimate_gini(&sample(&[0.0, 0.0]));
        assert_eq!(e.value, 0.0);
        assert!(e.degenerate);
        let e = estimate_gini_naive(&sample(&[0.0, 0.0, 0.0]));
        assert!(e.degenerate);
    }

    #[test]
    fn two_point_extreme() {
        assert_eq!(estimate_gini(&sample(&[0.0, 1.0])).value, 1.0);
        assert_eq!(estimate_gini_naive(&sample(&[0.0, 1.0])).value, 1.0);
    }

    #[test]
    fn three_point_hand_count() {
        // Pairs of [1,2,3]: |1-2| + |1-3| + |2-3| = 4; binom(3,2) = 3;
        // mean = 2, so Ghat = (4/3)/4 = 1/3.
        let e = estimate_gini_naive(&sample(&[1.0, 2.0, 3.0]));
        assert_relative_eq!(e.value, 1.0 / 3.0, max_relative = 1e-15);
        let s = estimate_gini(&sample(&[1.0, 2.0, 3.0]));
        assert_relative_eq!(s.value, 1.0 / 3.0, max_relative = 1e-15);
    }

    #[test]
    fn sorted_matches_naive_on_random_samples() {
        for (i, model) in [
            DistributionModel::poisson(2.0).unwrap(),
            DistributionModel::geometric(0.4).unwrap(),
            DistributionModel::gamma(1.5, 1.0).unwrap(),
        ]
        .into_iter()
        .enumerate()
        {
            let s = model.sample(200, 1_000 + i as u64).unwrap();
            let a = estimate_gini(&s).value;
            let b = estimate_gini_naive(&s).value;
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn scale_invariance() {
        let s = sample(&[0.0, 1.0, 1.0, 3.0, 7.5, 12.0]);
        let base = estimate_gini(&s).value;
        for b in [0.5, 3.0, 100.0] {
            let scaled = sample(&s.values().iter().map(|v| v * b).collect::<Vec<_>>());
            assert!((estimate_gini(&scaled).value - base).abs() < 1e-12);
        }
    }

    #[test]
    fn translation_identity() {
        // Ghat(a + x) = Ghat(x) · x̄ / (a + x̄), an algebraic identity of
        // the statistic.
        let s = sample(&[0.0, 1.0, 2.0, 5.0, 9.0]);
        let base = estimate_gini(&s);
        let xbar = s.mean();
        for a in [0.5, 2.0, 40.0] {
            let shifted = sample(&s.values().iter().map(|v| v + a).collect::<Vec<_>>());
            let expected = base.value * xbar / (a + xbar);
            assert!(
                (estimate_gini(&shifted).value - expected).abs() < 1e-12,
                "a = {a}"
            );
        }
    }

    #[test]
    fn permutation_gives_bitwise_identical_estimate() {
        let s1 = sample(&[3.0, 0.5, 9.0, 2.0, 2.0]);
        let s2 = sample(&[2.0, 9.0, 3.0, 2.0, 0.5]);
        assert_eq!(
            estimate_gini(&s1).value.to_bits(),
            estimate_gini(&s2).value.to_bits()
        );
    }

    #[test]
    fn range_bound() {
        // 0 <= Ghat <= n/(n-1); a single nonzero value attains 1.
        let s = sample(&[0.0, 0.0, 7.0]);
        let e = estimate_gini(&s);
        assert_relative_eq!(e.value, 1.0, max_relative = 1e-14);
        for seed in 0..20 {
            let s = DistributionModel::geometric(0.4)
                .unwrap()
                .sample(30, seed)
                .unwrap();
            let v = estimate_gini(&s).value;
            let n = s.len() as f64;
            assert!(v >= 0.0 && v <= n / (n - 1.0) + 1e-12);
        }
    }

    #[test]
    fn large_sample_compensated_sum_consistency() {
        let s = DistributionModel::gamma(2.0, 1.0)
            .unwrap()
            .sample(20_000, 5)
            .unwrap();
        let a = estimate_gini(&s).value;
        let b = estimate_gini_naive(&s).value;
        assert!((a - b).abs() < 1e-12, "{a} vs {b}");
    }

    #[test]
    fn cdf_gini_point_mass_is_zero() {
        // F jumps 0 -> 1 at c; F(1-F) vanishes off a null set.
        let g = gini_from_cdf(
            |x| if x < 3.0 { 0.0 } else { 1.0 },
            3.0,
            Support::Continuous,
            50.0,
        )
        .unwrap();
        assert!(g.abs() < 1e-10);
    }

    #[test]
    fn cdf_gini_geometric_series() {
        let m = DistributionModel::geometric(0.5).unwrap();
        let g = gini_from_cdf(|x| m.cdf(x), 1.0, Support::Discrete, 200.0).unwrap();
        assert!((g - 2.0 / 3.0).abs() < 1e-9);
    }

    #[test]
    fn cdf_gini_exponential() {
        let g = gini_from_cdf(|x| 1.0 - (-x).exp(), 1.0, Support::Continuous, 60.0).unwrap();
        assert!((g - 0.5).abs() < 1e-8);
    }

    #[test]
    fn cdf_gini_rejects_bad_mean() {
        assert!(gini_from_cdf(|_| 0.5, 0.0, Support::Discrete, 10.0).is_err());
        assert!(gini_from_cdf(|_| 0.5, -1.0, Support::Continuous, 10.0).is_err());
        assert!(gini_from_cdf(|_| 0.5, 1.0, Support::Discrete, f64::NAN).is_err());
    }
}
