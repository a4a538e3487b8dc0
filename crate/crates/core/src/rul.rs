//! Remaining-useful-life estimation: a least-squares exponential prior, an
//! adaptive Metropolis posterior over the model parameters, and
//! threshold-crossing quantiles that yield a conservative last operation
//! date.
//!
//! ```
//! use tribotron_core::degrade::FeatureSeries;
//! use tribotron_core::rul::fit_exponential_prior;
//!
//! let times: Vec<f64> = (0..60).map(|i| i as f64).collect();
//! let values: Vec<f64> = times.iter().map(|t| 0.5 * (0.01 * t).exp()).collect();
//! let series = FeatureSeries::new(1, times, values).unwrap();
//! let model = fit_exponential_prior(&series).unwrap();
//! assert!((model.c - 0.5).abs() < 1e-9);
//! assert!((model.b - 0.01).abs() < 1e-9);
//! ```

use chrono::{DateTime, Duration, Utc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::asset::{MetaParameters, RulModelPrior};
use crate::degrade::FeatureSeries;
use crate::error::{Error, Result};

/// Floor applied to the fitted residual variance.
const SIGMA2_FLOOR: f64 = 1e-12;

/// Iterations before proposal-covariance adaptation begins.
const ADAPTATION_START: usize = 100;

/// Scaling of the empirical covariance for a 2-dimensional target, 2.4²/2.
const PROPOSAL_SCALE: f64 = 2.88;

/// Regularization added to the adapted covariance diagonal.
const ADAPTATION_EPSILON: f64 = 1e-10;

// --- degradation model ----------------------------------------------------

/// Exponential degradation model `x(t) = c · exp(b · t)` with residual
/// variance `sigma2` on the data scale.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DegradationModel {
    /// Initial degradation level (positive).
    pub c: f64,
    /// Growth rate in 1/hour.
    pub b: f64,
    /// Residual variance on the data scale (positive).
    pub sigma2: f64,
}

impl From<RulModelPrior> for DegradationModel {
    fn from(p: RulModelPrior) -> Self {
        DegradationModel {
            c: p.c,
            b: p.b,
            sigma2: p.sigma2,
        }
    }
}

/// Least-squares prior fit: linear regression of `ln x` on `t` gives
/// `(ln c, b)`; the spread is then re-expressed on the data scale as the
/// mean squared residual of `x − c·exp(b·t)` (floored at 1e−12), which is
/// the scale the likelihood works on.
///
/// Needs at least 3 points, all values positive.
pub fn fit_exponential_prior(series: &FeatureSeries) -> Result<DegradationModel> {
    let k = series.len();
    if k < 3 {
        return Err(Error::RejectedInput(format!(
            "exponential fit needs at least 3 points, got {k}"
        )));
    }
    if let Some(bad) = series.values.iter().find(|v| !(**v > 0.0)) {
        return Err(Error::FitDomain(format!(
            "exponential fit needs positive values, found {bad}"
        )));
    }
    let t = &series.times_hours;
    let log_x: Vec<f64> = series.values.iter().map(|v| v.ln()).collect();
    let n = k as f64;
    let mt = t.iter().sum::<f64>() / n;
    let my = log_x.iter().sum::<f64>() / n;
    let (mut stt, mut sty) = (0.0, 0.0);
    for (ti, yi) in t.iter().zip(&log_x) {
        stt += (ti - mt) * (ti - mt);
        sty += (ti - mt) * (yi - my);
    }
    if stt == 0.0 {
        return Err(Error::FitDomain(
            "exponential fit needs more than one distinct time".into(),
        ));
    }
    let b = sty / stt;
    let c = (my - b * mt).exp();
    let sigma2 = series
        .values
        .iter()
        .zip(t)
        .map(|(x, ti)| {
            let r = x - c * (b * ti).exp();
            r * r
        })
        .sum::<f64>()
        / n;
    Ok(DegradationModel {
        c,
        b,
        sigma2: sigma2.max(SIGMA2_FLOOR),
    })
}

// --- posterior density ----------------------------------------------------

/// Log-posterior of `(c, b)`: Gaussian log-likelihood of the data-scale
/// residuals with variance `prior.sigma2`, plus independent Gaussian priors
/// on `c` and `b` centered at the prior estimates with standard deviation
/// `max(0.5·|estimate|, 1e−6)`. Nonpositive `c` is rejected with −∞.
pub fn log_posterior(params: (f64, f64), series: &FeatureSeries, prior: &DegradationModel) -> f64 {
    let (c, b) = params;
    if !(c > 0.0) {
        return f64::NEG_INFINITY;
    }
    let two_pi = std::f64::consts::TAU;
    let sigma2 = prior.sigma2;
    let mut lp = 0.0;
    for (x, t) in series.values.iter().zip(&series.times_hours) {
        let r = x - c * (b * t).exp();
        lp += -0.5 * (two_pi * sigma2).ln() - r * r / (2.0 * sigma2);
    }
    let sc = (0.5 * prior.c.abs()).max(1e-6);
    let sb = (0.5 * prior.b.abs()).max(1e-6);
    let dc = c - prior.c;
    let db = b - prior.b;
    lp += -0.5 * (two_pi * sc * sc).ln() - dc * dc / (2.0 * sc * sc);
    lp += -0.5 * (two_pi * sb * sb).ln() - db * db / (2.0 * sb * sb);
    lp
}

// --- adaptive Metropolis --------------------------------------------------

/// The retained posterior chain with its diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PosteriorSampleSet {
    /// Post-burn-in `(c, b)` states, in chain order.
    pub samples: Vec<[f64; 2]>,
    /// Total iterations run.
    pub n_simulations: u32,
    /// Leading iterations discarded (half the chain).
    pub burn_in_count: u32,
    /// Fraction of proposals accepted over the whole chain.
    pub acceptance_rate: f64,
}

fn cholesky2(c: &[[f64; 2]; 2]) -> Option<[[f64; 2]; 2]> {
    if !(c[0][0] > 0.0) {
        return None;
    }
    let l00 = c[0][0].sqrt();
    let l10 = c[1][0] / l00;
    let rest = c[1][1] - l10 * l10;
    if !(rest > 0.0) {
        return None;
    }
    Some([[l00, 0.0], [l10, rest.sqrt()]])
}

/// Metropolis random walk over a 2-dimensional target with a Gaussian
/// proposal whose covariance, after an initial period, is continually
/// re-estimated from the complete chain history (scaled by 2.4²/2 with a
/// small diagonal regularizer). The first half of the chain is burn-in;
/// identical seeds give identical chains.
pub fn adaptive_metropolis<F>(
    target: F,
    init: [f64; 2],
    n_simulations: u32,
    seed: u64,
) -> Result<PosteriorSampleSet>
where
    F: Fn([f64; 2]) -> f64,
{
    if n_simulations < 1000 {
        return Err(Error::Config(format!(
            "the sampler needs at least 1000 simulations, got {n_simulations}"
        )));
    }
    let mut lp_current = target(init);
    if !lp_current.is_finite() {
        return Err(Error::Sampling(format!(
            "target density is not finite at the initial point {init:?}"
        )));
    }
    let initial_cov = {
        let s0 = (0.1 * init[0].abs()).max(1e-6);
        let s1 = (0.1 * init[1].abs()).max(1e-6);
        [[s0 * s0, 0.0], [0.0, s1 * s1]]
    };
    let initial_chol = cholesky2(&initial_cov).expect("floored diagonal is positive definite");

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = n_simulations as usize;
    let mut states = Vec::with_capacity(n);
    let mut current = init;
    let mut accepted = 0usize;

    // running first and second moments of every past state, init included
    let mut count = 1.0;
    let mut sum = init;
    let mut sum_sq = [
        [init[0] * init[0], init[0] * init[1]],
        [init[1] * init[1], 0.0],
    ];

    for iteration in 0..n {
        let chol = if iteration < ADAPTATION_START || count < 2.5 {
            initial_chol
        } else {
            let inv = 1.0 / count;
            let mean = [sum[0] * inv, sum[1] * inv];
            let denom = count - 1.0;
            let cov_xx = (sum_sq[0][0] - count * mean[0] * mean[0]) / denom;
            let cov_xy = (sum_sq[0][1] - count * mean[0] * mean[1]) / denom;
            let cov_yy = (sum_sq[1][0] - count * mean[1] * mean[1]) / denom;
            let s = PROPOSAL_SCALE;
            let adapted = [
                [s * cov_xx + s * ADAPTATION_EPSILON, s * cov_xy],
                [s * cov_xy, s * cov_yy + s * ADAPTATION_EPSILON],
            ];
            cholesky2(&adapted).unwrap_or(initial_chol)
        };
        let z0: f64 = StandardNormal.sample(&mut rng);
        let z1: f64 = StandardNormal.sample(&mut rng);
        let proposal = [
            current[0] + chol[0][0] * z0,
            current[1] + chol[1][0] * z0 + chol[1][1] * z1,
        ];
        let lp_proposal = target(proposal);
        let ln_u = rng.gen::<f64>().ln();
        if ln_u < lp_proposal - lp_current {
            current = proposal;
            lp_current = lp_proposal;
            accepted += 1;
        }
        states.push(current);
        count += 1.0;
        sum[0] += current[0];
        sum[1] += current[1];
        sum_sq[0][0] += current[0] * current[0];
        sum_sq[0][1] += current[0] * current[1];
        sum_sq[1][0] += current[1] * current[1];
    }

    let burn_in = n / 2;
    Ok(PosteriorSampleSet {
        samples: states.split_off(burn_in),
        n_simulations,
        burn_in_count: burn_in as u32,
        acceptance_rate: accepted as f64 / n as f64,
    })
}

// --- threshold crossings --------------------------------------------------

/// Linear-interpolation quantile of an ascending-sorted slice.
fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    let m = sorted.len();
    let pos = p * (m - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

/// Per-time 5%/50%/95% bands of the degradation trajectory `c·exp(b·t)`
/// over a posterior sample set; rows are `(t, p5, p50, p95)`.
pub fn trajectory_quantiles(samples: &[[f64; 2]], times_hours: &[f64]) -> Vec<(f64, f64, f64, f64)> {
    let mut rows = Vec::with_capacity(times_hours.len());
    let mut levels = Vec::with_capacity(samples.len());
    for &t in times_hours {
        levels.clear();
        levels.extend(samples.iter().map(|s| s[0] * (s[1] * t).exp()));
        levels.sort_by(f64::total_cmp);
        rows.push((
            t,
            quantile_sorted(&levels, 0.05),
            quantile_sorted(&levels, 0.50),
            quantile_sorted(&levels, 0.95),
        ));
    }
    rows
}

/// The RUL verdict: conservative last operation date plus crossing quantiles
/// as calendar instants.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RulResult {
    /// 5th-percentile crossing instant — the earliest plausible failure.
    pub last_operation_date: DateTime<Utc>,
    /// 5% crossing quantile.
    pub crossing_p5: DateTime<Utc>,
    /// Median crossing.
    pub crossing_p50: DateTime<Utc>,
    /// 95% crossing quantile.
    pub crossing_p95: DateTime<Utc>,
    /// Threshold the crossings refer to (feature units).
    pub alarm_level_rul: f64,
    /// Fraction of posterior samples that never cross.
    pub censored_fraction: f64,
    /// Seed the posterior chain was run with.
    pub seed: u64,
    /// Acceptance rate of the chain (0 when no chain was run).
    pub acceptance_rate: f64,
    /// Prior the posterior was centered on.
    pub prior: DegradationModel,
    /// Value added to the series (and threshold) to make a nonpositive
    /// series fittable; 0 when no shift was needed.
    pub offset_shift: f64,
    /// True when the threshold was already reached at the last measurement,
    /// short-circuiting the forecast.
    pub immediate: bool,
}

fn hours_to_duration(hours: f64) -> Duration {
    Duration::milliseconds((hours * 3_600_000.0).round() as i64)
}

/// Estimate remaining useful life from a degradation-feature series.
///
/// Fits the prior (or takes it from the configuration), samples the
/// posterior, converts samples to threshold crossings `t = ln(T/c)/b`
/// (samples with `b ≤ 0` or `c ≥ T` are censored as never-crossing), and
/// returns crossing quantiles as instants anchored so the last series point
/// coincides with `last_measurement`. Crossings in the past clamp to
/// `last_measurement`; a threshold at or below the current level returns an
/// immediate crossing; censoring above 50% is a low-confidence error.
pub fn estimate_rul(
    series: &FeatureSeries,
    meta: &MetaParameters,
    last_measurement: DateTime<Utc>,
    seed: u64,
) -> Result<RulResult> {
    estimate_rul_detailed(series, meta, last_measurement, seed).map(|(result, _)| result)
}

/// [`estimate_rul`] plus the posterior sample set behind it, for callers
/// that also want model trajectories (see [`trajectory_quantiles`]).
///
/// The samples live on the fitting scale: when the result carries a nonzero
/// `offset_shift`, modeled values `c·e^(b·t)` are shifted by that amount
/// relative to the input series. No samples accompany an `immediate` result,
/// since no chain is run.
pub fn estimate_rul_detailed(
    series: &FeatureSeries,
    meta: &MetaParameters,
    last_measurement: DateTime<Utc>,
    seed: u64,
) -> Result<(RulResult, Option<PosteriorSampleSet>)> {
    if series.len() < 3 {
        return Err(Error::RejectedInput(format!(
            "RUL estimation needs at least 3 points, got {}",
            series.len()
        )));
    }
    let threshold = meta.alarm_level_rul;
    let t_last = *series.times_hours.last().unwrap();
    let run_start = last_measurement - hours_to_duration(t_last);

    // A nonpositive series cannot be log-fitted; shifting the series and the
    // threshold together leaves every crossing time unchanged.
    let (working, threshold, offset_shift) = match meta.rul_model_parameters {
        Some(_) => (series.clone(), threshold, 0.0),
        None => {
            let min = series.values.iter().cloned().fold(f64::INFINITY, f64::min);
            if min > 0.0 {
                (series.clone(), threshold, 0.0)
            } else {
                let max = series.values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
                let span = (max - min).max(1.0);
                let shift = 1e-6 * span - min;
                let shifted = FeatureSeries {
                    feature_id: series.feature_id,
                    times_hours: series.times_hours.clone(),
                    values: series.values.iter().map(|v| v + shift).collect(),
                };
                (shifted, threshold + shift, shift)
            }
        }
    };

    let prior: DegradationModel = match meta.rul_model_parameters {
        Some(p) => p.into(),
        None => fit_exponential_prior(&working)?,
    };

    let current_level = *working.values.last().unwrap();
    if threshold <= current_level {
        return Ok((
            RulResult {
                last_operation_date: last_measurement,
                crossing_p5: last_measurement,
                crossing_p50: last_measurement,
                crossing_p95: last_measurement,
                alarm_level_rul: meta.alarm_level_rul,
                censored_fraction: 0.0,
                seed,
                acceptance_rate: 0.0,
                prior,
                offset_shift,
                immediate: true,
            },
            None,
        ));
    }

    let chain = adaptive_metropolis(
        |params| log_posterior((params[0], params[1]), &working, &prior),
        [prior.c, prior.b],
        meta.n_simulations,
        seed,
    )?;

    let mut crossings: Vec<f64> = chain
        .samples
        .iter()
        .filter(|s| s[1] > 0.0 && s[0] < threshold)
        .map(|s| (threshold / s[0]).ln() / s[1])
        .collect();
    let censored_fraction = 1.0 - crossings.len() as f64 / chain.samples.len() as f64;
    if censored_fraction > 0.5 {
        return Err(Error::LowConfidence { censored_fraction });
    }
    crossings.sort_by(f64::total_cmp);
    let clamp = |hours: f64| run_start + hours_to_duration(hours.max(t_last));
    let p5 = clamp(quantile_sorted(&crossings, 0.05));
    let p50 = clamp(quantile_sorted(&crossings, 0.50));
    let p95 = clamp(quantile_sorted(&crossings, 0.95));
    let result = RulResult {
        last_operation_date: p5,
        crossing_p5: p5,
        crossing_p50: p50,
        crossing_p95: p95,
        alarm_level_rul: meta.alarm_level_rul,
        censored_fraction,
        seed,
        acceptance_rate: chain.acceptance_rate,
        prior,
        offset_shift,
        immediate: false,
    };
    Ok((result, Some(chain)))
}
