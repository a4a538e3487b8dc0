//! Degradation-feature preparation and selection: smoothing, resampling to a
//! uniform grid, the three goodness metrics (trend correlation, monotonicity,
//! robustness), and their weighted score.
//!
//! ```
//! use tribotron_core::degrade::{goodness_metrics, FeatureSeries};
//!
//! let times: Vec<f64> = (0..50).map(|i| i as f64).collect();
//! let values: Vec<f64> = times.iter().map(|t| (0.05 * t).exp()).collect();
//! let series = FeatureSeries::new(1, times, values).unwrap();
//! let (corr, mon, rob) = goodness_metrics(&series, 1).unwrap();
//! assert_eq!(mon, 1.0); // noiseless growth is perfectly monotone
//! assert_eq!(rob, 1.0); // window 1 leaves no residual
//! assert!(corr > 0.85);
//! ```

use serde::{Deserialize, Serialize};

use crate::asset::MetaParameters;
use crate::error::{Error, Result};

/// Default smoothing window for trend extraction, in samples.
pub const DEFAULT_SMOOTHING_WINDOW: usize = 20;

/// Default resampling step: 10 minutes, the measurement cadence of the
/// run-to-failure rig.
pub const DEFAULT_RESAMPLE_STEP_HOURS: f64 = 1.0 / 6.0;

/// Residual guard in the robustness denominator.
const ROBUSTNESS_GUARD: f64 = 1e-12;

// --- feature series -------------------------------------------------------

/// One feature tracked over a run: strictly increasing times (hours since
/// run start) with one value per time.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSeries {
    /// 1-based feature id the series belongs to.
    pub feature_id: usize,
    /// Sample times in hours, strictly increasing.
    pub times_hours: Vec<f64>,
    /// Feature value at each time.
    pub values: Vec<f64>,
}

impl FeatureSeries {
    /// Build a series, enforcing equal lengths and strictly increasing times.
    pub fn new(feature_id: usize, times_hours: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times_hours.len() != values.len() {
            return Err(Error::RejectedInput(format!(
                "series lengths differ: {} times vs {} values",
                times_hours.len(),
                values.len()
            )));
        }
        if times_hours.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::RejectedInput(
                "series times must be strictly increasing".into(),
            ));
        }
        Ok(FeatureSeries {
            feature_id,
            times_hours,
            values,
        })
    }

    /// Number of points.
    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// True when the series has no points.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

// --- smoothing and resampling ---------------------------------------------

/// Centered moving average over `window` samples with shrinking windows at
/// the edges; output length equals input length. `window` must be at least 1
/// and no longer than the series.
pub fn smooth_feature(series: &FeatureSeries, window: usize) -> Result<FeatureSeries> {
    let smoothed = smooth_values(&series.values, window)?;
    Ok(FeatureSeries {
        feature_id: series.feature_id,
        times_hours: series.times_hours.clone(),
        values: smoothed,
    })
}

fn smooth_values(values: &[f64], window: usize) -> Result<Vec<f64>> {
    if window < 1 {
        return Err(Error::Config("smoothing window must be at least 1".into()));
    }
    if window > values.len() {
        return Err(Error::Config(format!(
            "smoothing window {window} exceeds series length {}",
            values.len()
        )));
    }
    let left = (window - 1) / 2;
    let right = window / 2;
    let n = values.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let lo = i.saturating_sub(left);
        let hi = (i + right).min(n - 1);
        let sum: f64 = values[lo..=hi].iter().sum();
        out.push(sum / (hi - lo + 1) as f64);
    }
    Ok(out)
}

/// Piecewise-linear resampling onto the uniform grid starting at the first
/// time with spacing `step_hours`, never extrapolating past the last time.
/// The series must span at least two points.
pub fn resample_uniform(series: &FeatureSeries, step_hours: f64) -> Result<FeatureSeries> {
    if !(step_hours > 0.0) {
        return Err(Error::Config(format!(
            "resample step must be positive, got {step_hours}"
        )));
    }
    if series.len() < 2 {
        return Err(Error::RejectedInput(
            "resampling needs a series spanning at least 2 points".into(),
        ));
    }
    let t0 = series.times_hours[0];
    let t_end = *series.times_hours.last().unwrap();
    // tolerate float drift when the grid lands exactly on the endpoint
    let end_slack = step_hours * 1e-9;
    let mut times = Vec::new();
    let mut values = Vec::new();
    let mut segment = 0;
    let mut k = 0usize;
    loop {
        let t = t0 + k as f64 * step_hours;
        if t > t_end + end_slack {
            break;
        }
        let t = t.min(t_end);
        while segment + 2 < series.len() && series.times_hours[segment + 1] < t {
            segment += 1;
        }
        let (ta, tb) = (
            series.times_hours[segment],
            series.times_hours[segment + 1],
        );
        let (va, vb) = (series.values[segment], series.values[segment + 1]);
        let frac = ((t - ta) / (tb - ta)).clamp(0.0, 1.0);
        times.push(t);
        values.push(va + frac * (vb - va));
        k += 1;
    }
    FeatureSeries::new(series.feature_id, times, values)
}

// --- goodness metrics -----------------------------------------------------

fn pearson(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxx, mut syy, mut sxy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let dx = a - mx;
        let dy = b - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        0.0
    } else {
        sxy / (sxx * syy).sqrt()
    }
}

/// The three goodness metrics of a series: with trend `x̃` the `window`-wide
/// moving average and residual `r = x − x̃`,
///
/// * correlation — `|Pearson(x̃, t)|` (0 for a zero-variance trend),
/// * monotonicity — `|#{Δx̃ > 0} − #{Δx̃ < 0}| / (K − 1)`,
/// * robustness — `mean(exp(−|r_k| / (|x_k| + ε)))`.
///
/// Needs at least 3 points.
pub fn goodness_metrics(series: &FeatureSeries, window: usize) -> Result<(f64, f64, f64)> {
    let k = series.len();
    if k < 3 {
        return Err(Error::RejectedInput(format!(
            "goodness metrics need at least 3 points, got {k}"
        )));
    }
    let trend = smooth_values(&series.values, window)?;

    let corr = pearson(&trend, &series.times_hours).abs();

    let (mut ups, mut downs) = (0i64, 0i64);
    for w in trend.windows(2) {
        if w[1] > w[0] {
            ups += 1;
        } else if w[1] < w[0] {
            downs += 1;
        }
    }
    let mon = (ups - downs).unsigned_abs() as f64 / (k - 1) as f64;

    let rob = series
        .values
        .iter()
        .zip(&trend)
        .map(|(x, t)| (-((x - t).abs() / (x.abs() + ROBUSTNESS_GUARD))).exp())
        .sum::<f64>()
        / k as f64;

    Ok((corr, mon, rob))
}

/// Weighted goodness score `J = ω1·corr + ω2·mon + ω3·rob`; weights are
/// expected normalized (sum 1), as [`MetaParameters`] guarantees.
pub fn goodness_score(metrics: (f64, f64, f64), weights: [f64; 3]) -> f64 {
    weights[0] * metrics.0 + weights[1] * metrics.1 + weights[2] * metrics.2
}

// --- selection ------------------------------------------------------------

/// Metrics and score of one candidate feature.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GoodnessScores {
    /// 1-based feature id.
    pub feature_id: usize,
    /// Trend correlation with time.
    pub correlation: f64,
    /// Trend monotonicity.
    pub monotonicity: f64,
    /// Residual robustness.
    pub robustness: f64,
    /// Weighted score J.
    pub score: f64,
}

/// Result of degradation-feature selection across candidates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GoodnessReport {
    /// Per-candidate metrics in input order.
    pub scores: Vec<GoodnessScores>,
    /// Feature id of the winning candidate.
    pub selected_feature_id: usize,
    /// Normalized weights the scores were combined with.
    pub weights: [f64; 3],
}

impl GoodnessReport {
    /// Delimited table, one column per feature id: metric rows Corr, Mon,
    /// Rob, and J, plus a header and a selected-feature marker row.
    #[allow(clippy::type_complexity)]
    pub fn to_delimited(&self) -> String {
        let mut out = String::from("metric");
        for s in &self.scores {
            out.push_str(&format!("\tfeature_{}", s.feature_id));
        }
        out.push('\n');
        let rows: [(&str, fn(&GoodnessScores) -> f64); 4] = [
            ("corr", |s| s.correlation),
            ("mon", |s| s.monotonicity),
            ("rob", |s| s.robustness),
            ("score", |s| s.score),
        ];
        for (name, get) in rows {
            out.push_str(name);
            for s in &self.scores {
                out.push_str(&format!("\t{:.6}", get(s)));
            }
            out.push('\n');
        }
        out.push_str("selected");
        for s in &self.scores {
            out.push_str(if s.feature_id == self.selected_feature_id {
                "\t*"
            } else {
                "\t-"
            });
        }
        out.push('\n');
        out
    }
}

/// Score every candidate (resampled to the default uniform grid, trend
/// window [`DEFAULT_SMOOTHING_WINDOW`]) and select the highest J; exact ties
/// fall to the lowest feature id. Candidates that cannot be scored (too
/// short for the grid or the window) are reported with zero metrics; if no
/// candidate is scorable the selection fails.
pub fn select_degradation_feature(
    candidates: &[FeatureSeries],
    meta: &MetaParameters,
) -> Result<GoodnessReport> {
    select_degradation_feature_with(
        candidates,
        meta,
        DEFAULT_SMOOTHING_WINDOW,
        DEFAULT_RESAMPLE_STEP_HOURS,
    )
}

/// [`select_degradation_feature`] with explicit window and grid step.
pub fn select_degradation_feature_with(
    candidates: &[FeatureSeries],
    meta: &MetaParameters,
    window: usize,
    step_hours: f64,
) -> Result<GoodnessReport> {
    if candidates.is_empty() {
        return Err(Error::Selection("no candidate series".into()));
    }
    let weights = meta.deg_param_weights;
    let mut scores = Vec::with_capacity(candidates.len());
    let mut best: Option<(usize, f64)> = None;
    let mut any_scored = false;
    for series in candidates {
        let metrics = resample_uniform(series, step_hours)
            .and_then(|uniform| goodness_metrics(&uniform, window));
        let (corr, mon, rob, score, scored) = match metrics {
            Ok((c, m, r)) => (c, m, r, goodness_score((c, m, r), weights), true),
            Err(_) => (0.0, 0.0, 0.0, 0.0, false),
        };
        any_scored |= scored;
        if scored {
            let better = match best {
                None => true,
                Some((best_id, best_score)) => {
                    score > best_score
                        || (score == best_score && series.feature_id < best_id)
                }
            };
            if better {
                best = Some((series.feature_id, score));
            }
        }
        scores.push(GoodnessScores {
            feature_id: series.feature_id,
            correlation: corr,
            monotonicity: mon,
            robustness: rob,
            score,
        });
    }
    if !any_scored {
        return Err(Error::Selection(
            "no candidate series could be scored".into(),
        ));
    }
    Ok(GoodnessReport {
        scores,
        selected_feature_id: best.unwrap().0,
        weights,
    })
}
