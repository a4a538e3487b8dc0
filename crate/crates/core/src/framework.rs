//! The condition-analysis orchestrator: runs the registered plug-ins in
//! pipeline order — load data, extract features, detect the fault, and
//! (only when a fault is present) select a degradation feature and estimate
//! remaining useful life — with every phase wall-clock timed.
//!
//! ```no_run
//! use tribotron_core::asset::MetaParameters;
//! use tribotron_core::framework::analyze_condition;
//! use tribotron_core::plugin::PluginRegistry;
//!
//! let registry = PluginRegistry::with_builtins();
//! registry.register_measurement_directory("bearing", "/data/run1".as_ref(), 0).unwrap();
//! let meta = MetaParameters::default().normalize().unwrap();
//! let outcome = analyze_condition("asset.toml", &registry, "bearing", &meta, 7).unwrap();
//! assert_eq!(outcome.rul.is_some(), outcome.fault_status.is_faulty);
//! ```

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::asset::MetaParameters;
use crate::bearing::compute_fault_frequencies;
use crate::degrade::{select_degradation_feature, FeatureSeries, GoodnessReport};
use crate::detect::{FaultStatus, FaultType};
use crate::error::{Error, Result};
use crate::features::FEATURE_COUNT;
use crate::plugin::PluginRegistry;
use crate::rul::RulResult;

// --- timings --------------------------------------------------------------

/// Wall-clock seconds spent in each pipeline phase.
///
/// `rul_estimation` is absent exactly when `rul_skipped` is true — the
/// healthy-run contract. On a phase failure the carried timings are
/// partial: phases never entered stay at zero.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PhaseTimings {
    /// Asset + measurement loading, seconds.
    pub load_data: f64,
    /// Feature extraction, seconds.
    pub feature_extraction: f64,
    /// Fault detection, seconds.
    pub fault_detection: f64,
    /// Degradation-feature selection + RUL estimation, seconds; absent when
    /// the run was healthy.
    pub rul_estimation: Option<f64>,
    /// True when RUL estimation was skipped (no fault detected).
    pub rul_skipped: bool,
}

impl PhaseTimings {
    fn zeroed() -> Self {
        PhaseTimings {
            load_data: 0.0,
            feature_extraction: 0.0,
            fault_detection: 0.0,
            rul_estimation: None,
            rul_skipped: true,
        }
    }

    /// Sum of all recorded phase durations, seconds.
    pub fn total_seconds(&self) -> f64 {
        self.load_data
            + self.feature_extraction
            + self.fault_detection
            + self.rul_estimation.unwrap_or(0.0)
    }
}

// --- outcome --------------------------------------------------------------

/// Result of one full condition analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct AnalysisOutcome {
    /// Detection verdict.
    pub fault_status: FaultStatus,
    /// RUL estimate; present exactly when a fault was detected.
    pub rul: Option<RulResult>,
    /// Degradation-feature selection report; present exactly when a fault
    /// was detected.
    pub goodness: Option<GoodnessReport>,
    /// Per-phase wall-clock timings.
    pub timings: PhaseTimings,
}

/// A pipeline abort: the failing phase's name, the timings up to the
/// failure, and the underlying error.
#[derive(Debug)]
pub struct PhaseFailure {
    /// Name of the phase that failed.
    pub phase: &'static str,
    /// Partial timings: completed phases plus time spent in the failing one.
    pub timings: PhaseTimings,
    /// The underlying error.
    pub source: Error,
}

impl std::fmt::Display for PhaseFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "phase {} failed", self.phase)
    }
}

impl std::error::Error for PhaseFailure {
    fn source(&self) -> Option<&(dyn std::error::Error + 'static)> {
        Some(&self.source)
    }
}

impl From<PhaseFailure> for Error {
    fn from(failure: PhaseFailure) -> Self {
        failure.source.in_phase(failure.phase)
    }
}

// --- orchestration --------------------------------------------------------

/// Feature ids 1..=10 as degradation candidates from extracted rows, with
/// times in hours since the first row.
///
/// `target` picks which defect frequency the two envelope features (9–10)
/// are read at, in the row's target order.
pub fn candidate_series(
    rows: &[crate::features::FeatureRow],
    target: usize,
) -> Result<Vec<FeatureSeries>> {
    let t0 = rows[0].timestamp;
    let times: Vec<f64> = rows
        .iter()
        .map(|r| (r.timestamp - t0).num_milliseconds() as f64 / 3_600_000.0)
        .collect();
    (1..=FEATURE_COUNT)
        .map(|id| {
            let values = rows
                .iter()
                .map(|r| r.feature_values(target)[id - 1])
                .collect();
            FeatureSeries::new(id, times.clone(), values)
        })
        .collect()
}

/// Run the full pipeline for one asset.
///
/// `asset_id` is handed to the active asset-data implementation (the
/// built-in reads it as a configuration-file path) and `measurement_source`
/// names the registered measurement-data implementation to pull records
/// from. Phases run strictly in order; RUL estimation (including
/// degradation-feature selection) is skipped on a healthy verdict. Any
/// phase error aborts with that phase's name and the timings gathered so
/// far. Outcomes are deterministic for fixed inputs and seed; only the
/// timings vary run to run.
pub fn analyze_condition(
    asset_id: &str,
    registry: &PluginRegistry,
    measurement_source: &str,
    meta: &MetaParameters,
    seed: u64,
) -> std::result::Result<AnalysisOutcome, PhaseFailure> {
    let mut timings = PhaseTimings::zeroed();

    macro_rules! phase {
        ($slot:ident, $name:literal, $body:expr) => {{
            let clock = Instant::now();
            let result = $body;
            timings.$slot = clock.elapsed().as_secs_f64();
            match result {
                Ok(value) => value,
                Err(source) => {
                    return Err(PhaseFailure {
                        phase: $name,
                        timings,
                        source,
                    })
                }
            }
        }};
    }

    let (asset, run, freqs) = phase!(load_data, "loadData", (|| {
        let provider = registry.active_asset_data()?;
        let asset = provider.asset_record(asset_id)?;
        let source = registry.resolve_measurement_data(measurement_source)?;
        let run = source.measurement_run()?;
        if run.is_empty() {
            return Err(Error::RejectedInput(format!(
                "measurement source {measurement_source:?} yielded no records"
            )));
        }
        let freqs = compute_fault_frequencies(&asset.geometry, asset.shaft_rate_hz)?;
        Ok((asset, run, freqs))
    })());
    let _ = &asset;

    let rows = phase!(feature_extraction, "featureExtraction", (|| {
        let extractor = registry.active_feature_extractor()?;
        extractor.extract_features(&run, &freqs, meta)
    })());

    let fault_status = phase!(fault_detection, "faultDetection", (|| {
        let detector = registry.active_fault_detector()?;
        detector.detect(&rows, meta)
    })());

    if !fault_status.is_faulty {
        return Ok(AnalysisOutcome {
            fault_status,
            rul: None,
            goodness: None,
            timings,
        });
    }

    let clock = Instant::now();
    let degradation = (|| {
        let target = match fault_status.fault_type {
            FaultType::Bpfi => 0,
            FaultType::Bpfo => 1,
            FaultType::Bsf => 2,
            FaultType::Ftf | FaultType::None => {
                return Err(Error::Selection(format!(
                    "no degradation target for fault type {}",
                    fault_status.fault_type
                )))
            }
        };
        let candidates = candidate_series(&rows, target)?;
        let report = select_degradation_feature(&candidates, meta)?;
        let selected = candidates
            .into_iter()
            .find(|c| c.feature_id == report.selected_feature_id)
            .expect("the selected id names a candidate");
        let algorithm = registry.active_rul_algorithm()?;
        let last_measurement = rows.last().expect("rows are nonempty").timestamp;
        let rul = algorithm.estimate(&selected, meta, last_measurement, seed)?;
        Ok((report, rul))
    })();
    timings.rul_estimation = Some(clock.elapsed().as_secs_f64());
    timings.rul_skipped = false;
    let (goodness, rul) = match degradation {
        Ok(value) => value,
        Err(source) => {
            return Err(PhaseFailure {
                phase: "rulEstimation",
                timings,
                source,
            })
        }
    };

    Ok(AnalysisOutcome {
        fault_status,
        rul: Some(rul),
        goodness: Some(goodness),
        timings,
    })
}

// --- configuration audit --------------------------------------------------

/// One audited meta-parameter.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConfigAuditEntry {
    /// Parameter name as it appears in configuration files.
    pub name: String,
    /// Rendered value.
    pub value: String,
    /// True when the value equals the built-in default.
    pub is_default: bool,
}

/// The configuration-complexity report: every meta-parameter with its value
/// and default flag, plus the total count.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConfigAudit {
    /// One entry per meta-parameter, in declaration order.
    pub entries: Vec<ConfigAuditEntry>,
    /// Number of meta-parameters.
    pub count: usize,
}

impl ConfigAudit {
    /// Human-readable listing, one line per parameter plus the count.
    pub fn to_text(&self) -> String {
        let width = self
            .entries
            .iter()
            .map(|e| e.name.len())
            .max()
            .unwrap_or(0);
        let mut out = String::new();
        for e in &self.entries {
            let flag = if e.is_default { "default" } else { "overridden" };
            out.push_str(&format!("{:width$}  {}  ({flag})\n", e.name, e.value));
        }
        out.push_str(&format!("{} meta-parameters\n", self.count));
        out
    }
}

/// Audit a meta-parameter set: list each of the seven knobs, its value, and
/// whether it still equals the default. Pass the same (normalized) values
/// the pipeline runs with; defaults are compared after the same
/// normalization.
pub fn config_audit(meta: &MetaParameters) -> ConfigAudit {
    let defaults = MetaParameters::default()
        .normalize()
        .expect("defaults are valid");
    let weights = |w: [f64; 3]| format!("[{}, {}, {}]", w[0], w[1], w[2]);
    let entries = vec![
        ConfigAuditEntry {
            name: "alarm_level_fault".into(),
            value: format!("{}", meta.alarm_level_fault),
            is_default: meta.alarm_level_fault == defaults.alarm_level_fault,
        },
        ConfigAuditEntry {
            name: "mother_wavelet".into(),
            value: meta.mother_wavelet.clone(),
            is_default: meta.mother_wavelet == defaults.mother_wavelet,
        },
        ConfigAuditEntry {
            name: "n_decomposition_levels".into(),
            value: format!("{}", meta.n_decomposition_levels),
            is_default: meta.n_decomposition_levels == defaults.n_decomposition_levels,
        },
        ConfigAuditEntry {
            name: "deg_param_weights".into(),
            value: weights(meta.deg_param_weights),
            is_default: meta.deg_param_weights == defaults.deg_param_weights,
        },
        ConfigAuditEntry {
            name: "alarm_level_rul".into(),
            value: format!("{}", meta.alarm_level_rul),
            is_default: meta.alarm_level_rul == defaults.alarm_level_rul,
        },
        ConfigAuditEntry {
            name: "rul_model_parameters".into(),
            value: match &meta.rul_model_parameters {
                Some(p) => format!("c = {}, b = {}, sigma2 = {}", p.c, p.b, p.sigma2),
                None => "derived at run time from least squares".into(),
            },
            is_default: meta.rul_model_parameters == defaults.rul_model_parameters,
        },
        ConfigAuditEntry {
            name: "n_simulations".into(),
            value: format!("{}", meta.n_simulations),
            is_default: meta.n_simulations == defaults.n_simulations,
        },
    ];
    ConfigAudit {
        count: entries.len(),
        entries,
    }
}

// --- timing aggregation ---------------------------------------------------

/// Mean/std timing statistics for one phase over repeated runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PhaseStat {
    /// Phase name.
    pub phase: String,
    /// Runs that executed this phase.
    pub runs: usize,
    /// Mean duration, seconds.
    pub mean_s: f64,
    /// Sample standard deviation, seconds (0 for fewer than 2 runs).
    pub std_s: f64,
}

/// Per-phase timing statistics over repeated analyses: four rows, one per
/// pipeline function, each with mean and standard deviation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TimingTable {
    /// Rows in pipeline order.
    pub rows: Vec<PhaseStat>,
}

impl TimingTable {
    /// Delimited text: `function`, `runs`, `mean_s`, `std_s`.
    pub fn to_delimited(&self) -> String {
        let mut out = String::from("function\truns\tmean_s\tstd_s\n");
        for row in &self.rows {
            out.push_str(&format!(
                "{}\t{}\t{:.6}\t{:.6}\n",
                row.phase, row.runs, row.mean_s, row.std_s
            ));
        }
        out
    }
}

fn stat(phase: &str, samples: &[f64]) -> PhaseStat {
    let runs = samples.len();
    let mean = if runs == 0 {
        0.0
    } else {
        samples.iter().sum::<f64>() / runs as f64
    };
    let std = if runs < 2 {
        0.0
    } else {
        let ss = samples.iter().map(|s| (s - mean) * (s - mean)).sum::<f64>();
        (ss / (runs - 1) as f64).sqrt()
    };
    PhaseStat {
        phase: phase.to_string(),
        runs,
        mean_s: mean,
        std_s: std,
    }
}

/// Aggregate per-phase timings over repeated runs into mean/std rows.
/// The RUL row aggregates only the runs that executed the phase.
pub fn summarize_timings(timings: &[PhaseTimings]) -> TimingTable {
    let load: Vec<f64> = timings.iter().map(|t| t.load_data).collect();
    let features: Vec<f64> = timings.iter().map(|t| t.feature_extraction).collect();
    let detection: Vec<f64> = timings.iter().map(|t| t.fault_detection).collect();
    let rul: Vec<f64> = timings.iter().filter_map(|t| t.rul_estimation).collect();
    TimingTable {
        rows: vec![
            stat("loadData", &load),
            stat("featureExtraction", &features),
            stat("faultDetection", &detection),
            stat("rulEstimation", &rul),
        ],
    }
}
