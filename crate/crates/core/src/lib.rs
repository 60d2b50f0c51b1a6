//! Gini coefficients and the finite-sample behavior of their classical
//! pairwise estimator.
//!
//! The crate provides:
//!
//! - exact population Gini coefficients for Poisson, geometric, and gamma
//!   populations, plus the generic CDF characterization ∫F(1−F)/μ as an
//!   independent route ([`distributions`], [`gini`]);
//! - the pairwise estimator Ĝ with the binom(n,2) divisor, in both an
//!   O(n log n) sorted form and a quadratic reference form ([`gini`]);
//! - the exact finite-sample expectation E[Ĝ] through the
//!   exponential-tilting representation
//!   E[Ĝ] = n ∫₀^∞ E[Y_z] G(Y_z) ℒ_X^n(z) dz, with family-specific fast
//!   paths, analytic bias bounds, an exhaustive enumeration oracle, and
//!   plug-in bias-corrected estimators ([`expectation`]);
//! - a deterministic, thread-count-independent Monte Carlo engine for
//!   RelBias/RMSE studies of both estimators ([`montecarlo`]);
//! - the special functions the closed forms need: I₀, I₁,
//!   ₂F₁(1,n;n+1;z), ln Γ ([`specfun`]), and adaptive Gauss–Kronrod
//!   quadrature ([`quad`]).

pub mod distributions;
pub mod expectation;
pub mod gini;
pub mod montecarlo;
pub mod quad;
pub mod specfun;

mod rng;

pub use distributions::{DistributionModel, Family, ModelError, Sample, SampleError};
pub use expectation::{
    bias, brute_force_expected_ghat, corrected_estimate, expected_ghat, expected_ghat_generic,
    geometric_expected_ghat, poisson_expected_ghat, BiasReport, DiscreteFamily, ExpectationError,
    ExpectationResult, Method,
};
pub use gini::{estimate_gini, estimate_gini_naive, gini_from_cdf, GiniEstimate, Support};
pub use montecarlo::{
    derive_replication_seed, run_mc, summarize, EstimatorStats, MCConfig, MCReport, McCell,
    McError, SummaryAxis, SummaryRow,
};
pub use quad::{QuadResult, QuadratureError, QuadratureSettings};
