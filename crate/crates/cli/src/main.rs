//! Command-line front end for the bearing-prognostics pipeline.
//!
//! Eight subcommands drive the stages end to end: `synth` writes a synthetic
//! run directory, `ingest` writes a run manifest, `features` a feature
//! table, `detect` per-record fault statuses, `rul` a remaining-useful-life
//! report with quantile trajectories, `run-all` the chained pipeline,
//! `perf` repeated runs with per-phase timing statistics, and
//! `config-audit` the meta-parameter report.
//!
//! Every command writes machine-readable output to a file and prints a
//! human summary of the same values. Reports are byte-identical for
//! identical inputs and seed; wall-clock timings go to a separate document
//! so they never perturb a report diff. Usage errors exit with status 2,
//! pipeline failures with status 1 and the failing phase's name.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, ensure, Context, Result};
use chrono::{DateTime, Duration as TimeDelta, Utc};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use tribotron_core::asset::{AssetRecord, MetaParameters};
use tribotron_core::bearing::{compute_fault_frequencies, FaultFrequencies};
use tribotron_core::degrade::{select_degradation_feature, FeatureSeries, GoodnessReport};
use tribotron_core::detect::{
    alarm_level_from_rows, detect_from_row, first_detection, FaultStatus, FaultType,
    DEFAULT_BASELINE_COUNT,
};
use tribotron_core::features::{extract_row, feature_name, FeatureRow, FeatureVector};
use tribotron_core::framework::{
    analyze_condition, candidate_series, config_audit, summarize_timings, PhaseTimings,
};
use tribotron_core::io::{
    default_synthetic_timestamp, read_ims_record, scan_run_directory, synthesize_fault_signal,
    write_feature_table, SyntheticFaultSpec, IMS_SAMPLING_RATE_HZ,
};
use tribotron_core::plugin::{
    BearingFaultDetector, FaultDetector, InterfaceId, PluginFactory, PluginRegistry,
};
use tribotron_core::rul::{estimate_rul_detailed, trajectory_quantiles, RulResult};

// --- invocation -----------------------------------------------------------

#[derive(Parser)]
#[command(
    name = "tribotron",
    version,
    about = "Bearing condition monitoring and remaining-useful-life toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a synthetic run directory in the archive layout
    Synth(SynthArgs),
    /// Scan a run directory and write its manifest
    Ingest(IngestArgs),
    /// Extract the ten-feature table from one channel of a run
    Features(FeaturesArgs),
    /// Apply the baseline alarm rule record by record
    Detect(DetectArgs),
    /// Estimate remaining useful life after a detected fault
    Rul(RulArgs),
    /// Run the full pipeline: load, extract features, detect, estimate
    RunAll(RunAllArgs),
    /// Repeat the full pipeline and summarize per-phase timings
    Perf(PerfArgs),
    /// List every meta-parameter and whether it differs from the default
    ConfigAudit(ConfigAuditArgs),
}

/// Where the measurements come from.
#[derive(Args)]
struct DataArgs {
    /// Run directory of archive-layout measurement files
    #[arg(long, value_name = "DIR")]
    data_dir: PathBuf,
    /// 1-based measurement channel within each file
    #[arg(long, default_value_t = 1, value_name = "N")]
    channel: usize,
}

/// Which asset is being analyzed and under which configuration.
#[derive(Args)]
struct AssetArgs {
    /// Asset configuration file: geometry, shaft rate, optional meta table
    #[arg(long, value_name = "FILE")]
    asset_config: PathBuf,
    /// Meta-parameter file overriding the asset's own meta table
    #[arg(long, value_name = "FILE")]
    meta_config: Option<PathBuf>,
}

#[derive(Args)]
struct SynthArgs {
    /// Directory to write the record files into (created if missing)
    #[arg(long, value_name = "DIR")]
    out: PathBuf,
    /// Total records, spaced 10 minutes apart
    #[arg(long, default_value_t = 24, value_name = "N")]
    count: usize,
    /// 1-based record index where the fault appears (past the end: healthy)
    #[arg(long, default_value_t = 16, value_name = "N")]
    fault_at: usize,
    /// Impulse amplitude when the fault first appears
    #[arg(long, default_value_t = 1.0, value_name = "A")]
    amplitude: f64,
    /// Per-record amplitude growth factor once faulty
    #[arg(long, default_value_t = 1.3, value_name = "G")]
    growth: f64,
    /// Fault repetition frequency in hertz
    #[arg(long, default_value_t = 236.0, value_name = "HZ")]
    fault_frequency: f64,
    /// White-noise standard deviation
    #[arg(long, default_value_t = 0.1, value_name = "STD")]
    noise_std: f64,
    /// Base random seed; record i adds i to it
    #[arg(long, default_value_t = 0, value_name = "SEED")]
    seed: u64,
}

#[derive(Args)]
struct IngestArgs {
    /// Run directory of archive-layout measurement files
    #[arg(long, value_name = "DIR")]
    data_dir: PathBuf,
    /// Manifest file to write (JSON)
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Args)]
struct FeaturesArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    asset: AssetArgs,
    /// Feature table to write (tab-separated)
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Args)]
struct DetectArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    asset: AssetArgs,
    /// Leading records forming the steady-state baseline
    #[arg(long, value_name = "N")]
    baseline_count: Option<usize>,
    /// Detection report to write (JSON)
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Args)]
struct RulArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    asset: AssetArgs,
    /// Leading records forming the steady-state baseline
    #[arg(long, value_name = "N")]
    baseline_count: Option<usize>,
    /// Random seed for the posterior chain (reproducibility is seeded, never implicit)
    #[arg(long, value_name = "SEED")]
    seed: u64,
    /// RUL report to write (JSON)
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Args)]
struct RunAllArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    asset: AssetArgs,
    /// Leading records forming the steady-state baseline
    #[arg(long, value_name = "N")]
    baseline_count: Option<usize>,
    /// Random seed for the posterior chain (reproducibility is seeded, never implicit)
    #[arg(long, value_name = "SEED")]
    seed: u64,
    /// Analysis report to write (JSON); timings go to a sibling `.timings.json`
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Args)]
struct PerfArgs {
    #[command(flatten)]
    data: DataArgs,
    #[command(flatten)]
    asset: AssetArgs,
    /// Leading records forming the steady-state baseline
    #[arg(long, value_name = "N")]
    baseline_count: Option<usize>,
    /// Random seed reused for every run
    #[arg(long, value_name = "SEED")]
    seed: u64,
    /// Sequential pipeline runs to time
    #[arg(long, default_value_t = 10, value_name = "N")]
    runs: usize,
    /// Timing table to write (tab-separated)
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Args)]
struct ConfigAuditArgs {
    /// Meta-parameter file to audit (defaults used when omitted)
    #[arg(long, value_name = "FILE")]
    meta_config: Option<PathBuf>,
    /// Audit report to write (JSON)
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

fn main() -> ExitCode {
    let cli = Cli::parse(); // usage errors exit with status 2
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(error) => {
            eprintln!("error: {error:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Synth(args) => synth(args),
        Command::Ingest(args) => ingest(args),
        Command::Features(args) => features(args),
        Command::Detect(args) => detect(args),
        Command::Rul(args) => rul(args),
        Command::RunAll(args) => run_all(args),
        Command::Perf(args) => perf(args),
        Command::ConfigAudit(args) => audit(args),
    }
}

// --- shared plumbing ------------------------------------------------------

/// Meta-parameters for a run: the `--meta-config` file when given, else the
/// asset file's own `[meta]` table (which falls back to the defaults).
fn resolve_meta(asset: &AssetRecord, meta_config: &Option<PathBuf>) -> Result<MetaParameters> {
    match meta_config {
        Some(path) => {
            MetaParameters::load(path).context("loading meta configuration")
        }
        None => Ok(asset.meta.clone()),
    }
}

fn load_asset(args: &AssetArgs) -> Result<(AssetRecord, MetaParameters, FaultFrequencies)> {
    let asset = AssetRecord::load(&args.asset_config)
        .context("loading asset configuration")?;
    let meta = resolve_meta(&asset, &args.meta_config)?;
    let freqs = compute_fault_frequencies(&asset.geometry, asset.shaft_rate_hz)?;
    Ok((asset, meta, freqs))
}

/// Extract one feature row per archive file for a single channel, streaming
/// file by file so memory stays flat even on long runs.
fn extract_rows(
    data: &DataArgs,
    freqs: &FaultFrequencies,
    meta: &MetaParameters,
) -> Result<Vec<FeatureRow>> {
    ensure!(data.channel >= 1, "--channel is 1-based, got 0");
    let run = scan_run_directory(&data.data_dir)
        .with_context(|| format!("scanning {}", data.data_dir.display()))?;
    ensure!(
        data.channel <= run.channels_per_file,
        "channel {} requested but the files carry {}",
        data.channel,
        run.channels_per_file
    );
    let mut rows = Vec::with_capacity(run.records.len());
    for record_ref in &run.records {
        let mut records = read_ims_record(&record_ref.path)
            .with_context(|| format!("reading {}", record_ref.path.display()))?;
        let record = records.swap_remove(data.channel - 1);
        rows.push(extract_row(&record, freqs, meta)?);
    }
    Ok(rows)
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    write_text(path, &text)
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)
            .with_context(|| format!("creating {}", parent.display()))?;
    }
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

/// Pipeline registry over a run directory, with the detector reconfigured
/// when a baseline count is requested.
fn build_registry(data: &DataArgs, baseline_count: Option<usize>) -> Result<PluginRegistry> {
    ensure!(data.channel >= 1, "--channel is 1-based, got 0");
    let registry = PluginRegistry::with_builtins();
    registry.register_measurement_directory("archive", &data.data_dir, data.channel - 1)?;
    if let Some(baseline_count) = baseline_count {
        ensure!(baseline_count >= 1, "--baseline-count must be ≥ 1");
        registry.register_implementation(
            "configured-baseline",
            PluginFactory::fault_detector(move || BearingFaultDetector { baseline_count }),
        )?;
        registry.set_active(InterfaceId::FaultDetector, "configured-baseline")?;
    }
    Ok(registry)
}

fn utf8_path(path: &Path) -> Result<&str> {
    path.to_str()
        .with_context(|| format!("{} is not valid UTF-8", path.display()))
}

fn fault_label(fault_type: FaultType) -> &'static str {
    match fault_type {
        FaultType::Bpfi => "inner race (BPFI)",
        FaultType::Bpfo => "outer race (BPFO)",
        FaultType::Bsf => "rolling element (2·BSF)",
        FaultType::Ftf => "cage (FTF)",
        FaultType::None => "none",
    }
}

// --- synth ----------------------------------------------------------------

/// Generation manifest, written as a dotfile so directory scans skip it.
#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct SynthManifest {
    count: usize,
    fault_at: usize,
    amplitude: f64,
    growth: f64,
    fault_frequency_hz: f64,
    noise_std: f64,
    seed: u64,
    sampling_rate_hz: f64,
    duration_seconds: f64,
    files: Vec<String>,
}

fn synth(args: SynthArgs) -> Result<()> {
    ensure!(args.count >= 1, "--count must be ≥ 1");
    ensure!(args.fault_at >= 1, "--fault-at is 1-based, got 0");
    std::fs::create_dir_all(&args.out)
        .with_context(|| format!("creating {}", args.out.display()))?;

    let start = default_synthetic_timestamp();
    let mut files = Vec::with_capacity(args.count);
    for i in 0..args.count {
        let impulse_amplitude = if i + 1 < args.fault_at {
            0.0
        } else {
            args.amplitude * args.growth.powi((i + 1 - args.fault_at) as i32)
        };
        let spec = SyntheticFaultSpec {
            fault_frequency_hz: args.fault_frequency,
            impulse_amplitude,
            noise_std: args.noise_std,
            seed: args.seed + i as u64,
            // archive layout: exactly one second at the archive rate
            duration_seconds: 1.0,
            sampling_rate_hz: IMS_SAMPLING_RATE_HZ,
            // sharp, well-separated bursts: dense overlapping bursts make the
            // scale-normalized features decay smoothly as the fault grows,
            // which starves the growth-based prognosis of a usable trend
            impulse_decay_per_s: 8000.0,
            ..SyntheticFaultSpec::default()
        };
        let mut record = synthesize_fault_signal(&spec)?;
        record.timestamp = start + TimeDelta::minutes(10 * i as i64);
        let name = record.timestamp.format("%Y.%m.%d.%H.%M.%S").to_string();
        let mut body = String::with_capacity(record.samples.len() * 12);
        for sample in &record.samples {
            body.push_str(&format!("{sample:.6}\n"));
        }
        write_text(&args.out.join(&name), &body)?;
        files.push(name);
    }

    let manifest = SynthManifest {
        count: args.count,
        fault_at: args.fault_at,
        amplitude: args.amplitude,
        growth: args.growth,
        fault_frequency_hz: args.fault_frequency,
        noise_std: args.noise_std,
        seed: args.seed,
        sampling_rate_hz: IMS_SAMPLING_RATE_HZ,
        duration_seconds: 1.0,
        files,
    };
    write_json(&args.out.join(".synth-manifest.json"), &manifest)?;

    if args.fault_at <= args.count {
        println!(
            "wrote {} records to {} (fault at {} Hz from record {}, seed {})",
            args.count,
            args.out.display(),
            args.fault_frequency,
            args.fault_at,
            args.seed
        );
    } else {
        println!(
            "wrote {} healthy records to {} (seed {})",
            args.count,
            args.out.display(),
            args.seed
        );
    }
    Ok(())
}

// --- ingest ---------------------------------------------------------------

fn ingest(args: IngestArgs) -> Result<()> {
    let run = scan_run_directory(&args.data_dir)
        .with_context(|| format!("scanning {}", args.data_dir.display()))?;
    write_json(&args.out, &run)?;
    let first = run.records.first().expect("a scanned run is nonempty");
    let last = run.records.last().expect("a scanned run is nonempty");
    println!(
        "{} records ({} channels × {} samples) from {} to {}",
        run.records.len(),
        run.channels_per_file,
        run.samples_per_file,
        first.timestamp.to_rfc3339(),
        last.timestamp.to_rfc3339()
    );
    println!("manifest written to {}", args.out.display());
    Ok(())
}

// --- features -------------------------------------------------------------

fn features(args: FeaturesArgs) -> Result<()> {
    let (_, meta, freqs) = load_asset(&args.asset)?;
    let rows = extract_rows(&args.data, &freqs, &meta)?;
    // features 9–10 take each row's strongest characteristic line, so the
    // table stays meaningful before the defect type is known
    let vectors: Vec<FeatureVector> = rows
        .iter()
        .map(|row| {
            let mut values = row.feature_values(0);
            values[8] = row.raw_envelope_amp.iter().cloned().fold(0.0, f64::max);
            values[9] = row.wavelet_envelope_amp.iter().cloned().fold(0.0, f64::max);
            FeatureVector {
                timestamp: row.timestamp,
                values,
            }
        })
        .collect();
    write_feature_table(&vectors, &args.out)?;
    println!(
        "extracted {} records × {} features from channel {} of {}",
        vectors.len(),
        vectors[0].values.len(),
        args.data.channel,
        args.data.data_dir.display()
    );
    println!("feature table written to {}", args.out.display());
    Ok(())
}

// --- detect ---------------------------------------------------------------

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct DetectReport {
    alarm_level: f64,
    baseline_count: usize,
    first_detection: Option<DateTime<Utc>>,
    verdict: FaultStatus,
    records: Vec<FaultStatus>,
}

fn detect(args: DetectArgs) -> Result<()> {
    let (_, meta, freqs) = load_asset(&args.asset)?;
    let rows = extract_rows(&args.data, &freqs, &meta)?;
    let baseline_count = args.baseline_count.unwrap_or(DEFAULT_BASELINE_COUNT);
    ensure!(baseline_count >= 1, "--baseline-count must be ≥ 1");

    let baseline = &rows[..baseline_count.min(rows.len())];
    let alarm_level = alarm_level_from_rows(baseline, meta.alarm_level_fault)?;
    let records: Vec<FaultStatus> = rows
        .iter()
        .map(|row| detect_from_row(row, alarm_level))
        .collect();
    let first = first_detection(&rows, alarm_level);
    let verdict = BearingFaultDetector { baseline_count }.detect(&rows, &meta)?;

    let report = DetectReport {
        alarm_level,
        baseline_count,
        first_detection: first.map(|i| rows[i].timestamp),
        verdict: verdict.clone(),
        records,
    };
    write_json(&args.out, &report)?;

    println!(
        "alarm level {} over a {}-record baseline",
        alarm_level,
        baseline.len()
    );
    match first {
        Some(index) => println!(
            "fault detected at record {} of {} ({}): {}, amplitude {}",
            index + 1,
            rows.len(),
            rows[index].timestamp.to_rfc3339(),
            fault_label(verdict.fault_type),
            verdict.detected_amplitude
        ),
        None => println!("no fault detected in {} records", rows.len()),
    }
    println!("detection report written to {}", args.out.display());
    Ok(())
}

// --- rul ------------------------------------------------------------------

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct TrajectoryPoint {
    hours: f64,
    p5: f64,
    p50: f64,
    p95: f64,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct RulReport {
    selected_feature_id: usize,
    selected_feature: String,
    goodness: GoodnessReport,
    rul: RulResult,
    /// Modeled degradation quantiles on the input scale, hours since the
    /// first record.
    trajectory: Vec<TrajectoryPoint>,
}

/// Sign-carrying least-squares slope of a feature series against time.
fn trend_slope(series: &FeatureSeries) -> f64 {
    let n = series.len() as f64;
    let mt = series.times_hours.iter().sum::<f64>() / n;
    let mv = series.values.iter().sum::<f64>() / n;
    let mut num = 0.0;
    let mut den = 0.0;
    for (t, v) in series.times_hours.iter().zip(&series.values) {
        num += (t - mt) * (v - mv);
        den += (t - mt) * (t - mt);
    }
    if den > 0.0 { num / den } else { 0.0 }
}

fn rul(args: RulArgs) -> Result<()> {
    let (_, meta, freqs) = load_asset(&args.asset)?;
    let rows = extract_rows(&args.data, &freqs, &meta)?;
    let baseline_count = args.baseline_count.unwrap_or(DEFAULT_BASELINE_COUNT);
    let status = BearingFaultDetector { baseline_count }.detect(&rows, &meta)?;
    if !status.is_faulty {
        bail!("no fault detected across {} records; rulEstimation needs a faulty run", rows.len());
    }
    let target = match status.fault_type {
        FaultType::Bpfi => 0,
        FaultType::Bpfo => 1,
        FaultType::Bsf => 2,
        other => bail!("no degradation target for fault type {other:?}"),
    };

    let candidates = candidate_series(&rows, target)?;
    let goodness = select_degradation_feature(&candidates, &meta)?;
    let series = candidates
        .into_iter()
        .find(|c| c.feature_id == goodness.selected_feature_id)
        .expect("the selected id names a candidate");
    let last_measurement = rows.last().expect("rows are nonempty").timestamp;
    let (result, chain) = match estimate_rul_detailed(&series, &meta, last_measurement, args.seed)
    {
        Ok(pair) => pair,
        Err(err) if trend_slope(&series) < 0.0 => bail!(
            "{err}; the selected feature ({}) trends downward over this run, so a growth \
             model cannot reach an alarm level above the current value — check the alarm \
             level or supply explicit model parameters",
            feature_name(goodness.selected_feature_id),
        ),
        Err(err) => return Err(err.into()),
    };

    // quantile trajectory out to just past the p95 crossing, on the input scale
    let trajectory = match &chain {
        Some(chain) => {
            let t_last = *series.times_hours.last().expect("a nonempty series");
            let p95_hours = t_last
                + (result.crossing_p95 - last_measurement).num_milliseconds() as f64 / 3.6e6;
            let horizon = 1.05 * p95_hours;
            let times: Vec<f64> = (0..=200).map(|i| horizon * i as f64 / 200.0).collect();
            trajectory_quantiles(&chain.samples, &times)
                .into_iter()
                .map(|(hours, p5, p50, p95)| TrajectoryPoint {
                    hours,
                    p5: p5 - result.offset_shift,
                    p50: p50 - result.offset_shift,
                    p95: p95 - result.offset_shift,
                })
                .collect()
        }
        None => Vec::new(),
    };

    let report = RulReport {
        selected_feature_id: goodness.selected_feature_id,
        selected_feature: feature_name(goodness.selected_feature_id).to_string(),
        goodness,
        rul: result.clone(),
        trajectory,
    };
    write_json(&args.out, &report)?;

    println!(
        "degradation feature: {} (feature {})",
        report.selected_feature, report.selected_feature_id
    );
    if result.immediate {
        println!(
            "degradation already at the alarm level {}; last operation date {}",
            result.alarm_level_rul,
            result.last_operation_date.to_rfc3339()
        );
    } else {
        println!(
            "threshold {} crossings: p5 {}, p50 {}, p95 {}",
            result.alarm_level_rul,
            result.crossing_p5.to_rfc3339(),
            result.crossing_p50.to_rfc3339(),
            result.crossing_p95.to_rfc3339()
        );
        println!(
            "last operation date {} (seed {}, acceptance rate {}, censored fraction {})",
            result.last_operation_date.to_rfc3339(),
            result.seed,
            result.acceptance_rate,
            result.censored_fraction
        );
    }
    println!("RUL report written to {}", args.out.display());
    Ok(())
}

// --- run-all --------------------------------------------------------------

/// The deterministic analysis report; timings live in a separate document.
#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct RunReport {
    fault_status: FaultStatus,
    rul_skipped: bool,
    goodness: Option<GoodnessReport>,
    rul: Option<RulResult>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct TimingsDocument {
    timings: PhaseTimings,
    total_seconds: f64,
}

fn timings_path(out: &Path) -> PathBuf {
    out.with_extension("timings.json")
}

fn run_all(args: RunAllArgs) -> Result<()> {
    let (asset, meta, _) = load_asset(&args.asset)?;
    let registry = build_registry(&args.data, args.baseline_count)?;
    let outcome = analyze_condition(
        utf8_path(&args.asset.asset_config)?,
        &registry,
        "archive",
        &meta,
        args.seed,
    )
    .map_err(anyhow::Error::new)?;

    let report = RunReport {
        fault_status: outcome.fault_status.clone(),
        rul_skipped: outcome.timings.rul_skipped,
        goodness: outcome.goodness.clone(),
        rul: outcome.rul.clone(),
    };
    write_json(&args.out, &report)?;
    let timings = TimingsDocument {
        total_seconds: outcome.timings.total_seconds(),
        timings: outcome.timings,
    };
    write_json(&timings_path(&args.out), &timings)?;

    println!("asset {}:", asset.asset_id);
    if report.fault_status.is_faulty {
        println!(
            "  fault: {} at {}, amplitude {} over alarm {}",
            fault_label(report.fault_status.fault_type),
            report.fault_status.detection_time.to_rfc3339(),
            report.fault_status.detected_amplitude,
            report.fault_status.alarm_level
        );
        if let Some(rul) = &report.rul {
            println!(
                "  last operation date {} (median crossing {})",
                rul.last_operation_date.to_rfc3339(),
                rul.crossing_p50.to_rfc3339()
            );
        }
    } else {
        println!("  healthy; RUL estimation skipped");
    }
    println!("report written to {}", args.out.display());
    println!("timings written to {}", timings_path(&args.out).display());
    Ok(())
}

// --- perf -----------------------------------------------------------------

fn perf(args: PerfArgs) -> Result<()> {
    ensure!(args.runs >= 1, "--runs must be ≥ 1");
    let (_, meta, _) = load_asset(&args.asset)?;
    let registry = build_registry(&args.data, args.baseline_count)?;
    let asset_id = utf8_path(&args.asset.asset_config)?;

    // sequential on purpose: concurrent runs would contend and skew timings
    let mut timings = Vec::with_capacity(args.runs);
    for _ in 0..args.runs {
        let outcome = analyze_condition(asset_id, &registry, "archive", &meta, args.seed)
            .map_err(anyhow::Error::new)?;
        timings.push(outcome.timings);
    }
    let table = summarize_timings(&timings);
    let text = table.to_delimited();
    write_text(&args.out, &text)?;
    println!("{} runs:", args.runs);
    print!("{text}");
    println!("timing table written to {}", args.out.display());
    Ok(())
}

// --- config-audit ---------------------------------------------------------

fn audit(args: ConfigAuditArgs) -> Result<()> {
    let meta = match &args.meta_config {
        Some(path) => {
            MetaParameters::load(path).context("loading meta configuration")?
        }
        None => MetaParameters::default().normalize()?,
    };
    let audit = config_audit(&meta);
    write_json(&args.out, &audit)?;
    print!("{}", audit.to_text());
    println!("audit written to {}", args.out.display());
    Ok(())
}
