//! Seeded Monte Carlo replication engine for the estimator study:
//! RelBias and RMSE of the uncorrected and plug-in-corrected Gini
//! estimators over parameter × sample-size grids.
//!
//! Reproducibility contract: replication r of cell (family, param-index,
//! n) draws from a SplitMix64 stream seeded by a mix-hash of
//! (base_seed, family, param_index, n, r). Replications are independent
//! work units; aggregation is a sequential reduction in replication-index
//! order, so reports are bit-identical for any worker count.

use rayon::prelude::*;
use thiserror::Error;

use crate::distributions::{DistributionModel, Family, ModelError};
use crate::expectation::{self, ExpectationError};
use crate::gini;
use crate::quad::QuadratureSettings;
use crate::rng::mix64;

/// Parameter floor used when a replication comes out all-zero: the ML
/// estimate sits on the boundary, so the plug-in is evaluated just inside
/// the domain and the event is counted in the report.
pub const DEGENERATE_RATE_FLOOR: f64 = 1e-8;
pub const DEGENERATE_P_CEILING: f64 = 1.0 - 1e-8;

#[derive(Debug, Clone, PartialEq)]
pub struct MCConfig {
    pub family: Family,
    /// λ values (Poisson), p values (geometric), or shape values (gamma;
    /// the rate is fixed at 1 — the estimator's law is scale-free).
    pub params: Vec<f64>,
    pub sample_sizes: Vec<usize>,
    pub replications: usize,
    pub base_seed: u64,
    /// Clamp corrected estimates into [0, 1] before aggregation
    /// (reporting option; off by default).
    pub clip_corrected: bool,
}

impl MCConfig {
    pub fn validate(&self) -> Result<(), McError> {
        if self.params.is_empty() {
            return Err(McError::EmptyGrid("params"));
        }
        if self.sample_sizes.is_empty() {
            return Err(McError::EmptyGrid("sample sizes"));
        }
        if self.replications == 0 {
            return Err(McError::NoReplications);
        }
        for &n in &self.sample_sizes {
            if n < 2 {
                return Err(McError::SampleSizeTooSmall(n));
            }
        }
        for &param in &self.params {
            self.model(param)?;
        }
        Ok(())
    }

    fn model(&self, param: f64) -> Result<DistributionModel, ModelError> {
        match self.family {
            Family::Poisson => DistributionModel::poisson(param),
            Family::Geometric => DistributionModel::geometric(param),
            Family::Gamma => DistributionModel::gamma(param, 1.0),
        }
    }
}

#[derive(Debug, Error)]
pub enum McError {
    #[error("{0} grid must be non-empty")]
    EmptyGrid(&'static str),
    #[error("replications must be >= 1")]
    NoReplications,
    #[error("sample size {0} below the minimum of 2")]
    SampleSizeTooSmall(usize),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error(transparent)]
    Expectation(#[from] ExpectationError),
}

/// Per-estimator aggregate over one grid cell.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimatorStats {
    /// Monte Carlo mean of the estimator.
    pub mean: f64,
    /// (1/R) Σ (Ĝ_r − G)/G.
    pub relbias: f64,
    /// sqrt((1/R) Σ (Ĝ_r − G)²).
    pub rmse: f64,
    /// Standard error of the Monte Carlo mean (sample sd / √R).
    pub mc_se: f64,
}

/// One (family, param, n) cell of the study.
#[derive(Debug, Clone, PartialEq)]
pub struct McCell {
    pub family: Family,
    pub param: f64,
    pub param_index: usize,
    pub n: usize,
    /// Exact population Gini.
    pub gini: f64,
    /// Analytic E[Ĝ] from the expectation module (for MC consistency
    /// checks).
    pub analytic_expectation: f64,
    pub uncorrected: EstimatorStats,
    pub corrected: EstimatorStats,
    pub degenerate_count: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MCReport {
    pub config: MCConfig,
    pub cells: Vec<McCell>,
}

/// Deterministic seed for replication `r` of a grid cell.
pub fn derive_replication_seed(
    base_seed: u64,
    family: Family,
    param_index: usize,
    n: usize,
    replication: usize,
) -> u64 {
    let mut state = mix64(base_seed ^ 0x9e37_79b9_7f4a_7c15);
    for part in [
        family.tag(),
        param_index as u64,
        n as u64,
        replication as u64,
    ] {
        state = mix64(state.wrapping_add(0x9e37_79b9_7f4a_7c15) ^ mix64(part));
    }
    state
}

/// Runs the full study described by `config`.
///
/// Replications within a cell run on the rayon pool; the output is
/// independent of its size.
pub fn run_mc(config: &MCConfig) -> Result<MCReport, McError> {
    config.validate()?;
    let settings = QuadratureSettings::default();
    let mut cells = Vec::with_capacity(config.params.len() * config.sample_sizes.len());
    for (param_index, &param) in config.params.iter().enumerate() {
        let model = config.model(param)?;
        let g = model.gini_exact()?;
        for &n in &config.sample_sizes {
            let analytic = expectation::expected_ghat(&model, n, &settings)?.value;
            let cell = run_cell(
                config,
                &model,
                param,
                param_index,
                n,
                g,
                analytic,
                &settings,
            )?;
            cells.push(cell);
        }
    }
    Ok(MCReport {
        config: config.clone(),
        cells,
    })
}

#[allow(clippy::too_many_arguments)]
fn run_cell(
    config: &MCConfig,
    model: &DistributionModel,
    param: f64,
    param_index: usize,
    n: usize,
    g: f64,
    analytic: f64,
    settings: &QuadratureSettings,
) -> Result<McCell, McError> {
    let family = config.family;
    let replicate = |r: usize| -> Result<(f64, f64, bool), McError> {
        let seed = derive_replication_seed(config.base_seed, family, param_index, n, r);
        let sample = model.sample(n, seed)?;
        let ghat = gini::estimate_gini(&sample).value;
        let degenerate = sample.total() == 0.0;
        let corrected = match family {
            Family::Gamma => ghat, // zero bias, zero correction
            Family::Poisson | Family::Geometric => {
                let xbar = sample.mean();
                let plug_in = match family {
                    Family::Poisson => DistributionModel::poisson(if degenerate {
                        DEGENERATE_RATE_FLOOR
                    } else {
                        xbar
                    })?,
                    Family::Geometric => DistributionModel::geometric(if degenerate {
                        DEGENERATE_P_CEILING
                    } else {
                        1.0 / (1.0 + xbar)
                    })?,
                    Family::Gamma => unreachable!(),
                };
                let b = expectation::bias(&plug_in, n, settings)?.bias;
                let value = ghat - b;
                if config.clip_corrected {
                    value.clamp(0.0, 1.0)
                } else {
                    value
                }
            }
        };
        Ok((ghat, corrected, degenerate))
    };

    // Parallel map preserves replication order; the fold below is
    // sequential so sums do not depend on the worker count.
    let draws: Vec<Result<(f64, f64, bool), McError>> = (0..config.replications)
        .into_par_iter()
        .map(replicate)
        .collect();
    let mut ghat = Vec::with_capacity(config.replications);
    let mut corrected = Vec::with_capacity(config.replications);
    let mut degenerate_count = 0usize;
    for d in draws {
        let (u, c, deg) = d?;
        ghat.push(u);
        corrected.push(c);
        if deg {
            degenerate_count += 1;
        }
    }
    Ok(McCell {
        family,
        param,
        param_index,
        n,
        gini: g,
        analytic_expectation: analytic,
        uncorrected: aggregate(&ghat, g),
        corrected: aggregate(&corrected, g),
        degenerate_count,
    })
}

fn aggregate(values: &[f64], g: f64) -> EstimatorStats {
    let r = values.len() as f64;
    let mean = gini::neumaier_sum(values.iter().copied()) / r;
    let mse = gini::neumaier_sum(values.iter().map(|v| (v - g) * (v - g))) / r;
    let var = if values.len() > 1 {
        gini::neumaier_sum(values.iter().map(|v| (v - mean) * (v - mean))) / (r - 1.0)
    } else {
        0.0
    };
    EstimatorStats {
        mean,
        relbias: (mean - g) / g,
        rmse: mse.sqrt(),
        mc_se: (var / r).sqrt(),
    }
}

/// Axis selector for [`summarize`]: rows ordered along one grid axis with
/// the other held fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SummaryAxis {
    /// Vary n, fixing the parameter value.
    ByN { param: f64 },
    /// Vary the parameter, fixing n.
    ByParam { n: usize },
}

/// One summary row: both estimators' metrics at one axis position.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SummaryRow {
    pub axis_value: f64,
    pub relbias_uncorrected: f64,
    pub relbias_corrected: f64,
    pub rmse_uncorrected: f64,
    pub rmse_corrected: f64,
}

pub fn summarize(report: &MCReport, axis: SummaryAxis) -> Vec<SummaryRow> {
    let mut rows: Vec<SummaryRow> = report
        .cells
        .iter()
        .filter(|cell| match axis {
            SummaryAxis::ByN { param } => cell.param == param,
            SummaryAxis::ByParam { n } => cell.n == n,
        })
        .map(|cell| SummaryRow {
            axis_value: match axis {
                SummaryAxis::ByN { .. } => cell.n as f64,
                SummaryAxis::ByParam { .. } => cell.param,
            },
            relbias_uncorrected: cell.uncorrected.relbias,
            relbias_corrected: cell.corrected.relbias,
            rmse_uncorrected: cell.uncorrected.rmse,
            rmse_corrected: cell.corrected.rmse,
        })
        .collect();
    rows.sort_by(|a, b| a.axis_value.total_cmp(&b.axis_value));
    rows
}
