//! Data ingestion and persistence: run-to-failure archive files in the
//! public test-rig layout, deterministic synthetic fault signals for
//! oracles, and delimited feature tables with a bit-exact round trip.
//!
//! ```
//! use tribotron_core::io::{synthesize_fault_signal, SyntheticFaultSpec};
//!
//! let spec = SyntheticFaultSpec {
//!     fault_frequency_hz: 236.0,
//!     seed: 7,
//!     ..SyntheticFaultSpec::default()
//! };
//! let record = synthesize_fault_signal(&spec).unwrap();
//! assert_eq!(record.samples.len(), 20480);
//! ```

use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use chrono::{DateTime, NaiveDateTime, SecondsFormat, TimeZone, Utc};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::features::{feature_name, FeatureVector};
use crate::signal::{MeasurementRun, VibrationRecord};

/// Sample count and sampling rate of the archive files.
pub const IMS_SAMPLES_PER_FILE: usize = 20480;

/// Sampling rate of the archive files, in Hz.
pub const IMS_SAMPLING_RATE_HZ: f64 = 20480.0;

const FILENAME_TIMESTAMP_FORMAT: &str = "%Y.%m.%d.%H.%M.%S";

// --- run directories ------------------------------------------------------

/// One record file inside a run directory.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RecordRef {
    /// Timestamp decoded from the filename.
    pub timestamp: DateTime<Utc>,
    /// Full path of the file.
    pub path: PathBuf,
}

/// A scanned run-to-failure directory: time-ordered record files plus the
/// layout read off the first file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunDirectory {
    /// The scanned directory.
    pub path: PathBuf,
    /// Record files sorted by filename-encoded timestamp.
    pub records: Vec<RecordRef>,
    /// Columns per file (channels).
    pub channels_per_file: usize,
    /// Rows per file (samples per record).
    pub samples_per_file: usize,
}

fn filename_timestamp(path: &Path) -> Result<DateTime<Utc>> {
    let name = path
        .file_name()
        .and_then(|n| n.to_str())
        .unwrap_or_default();
    let naive = NaiveDateTime::parse_from_str(name, FILENAME_TIMESTAMP_FORMAT).map_err(|_| {
        Error::Timestamp(format!(
            "file name {name:?} does not encode a year.month.day.hour.minute.second timestamp"
        ))
    })?;
    Ok(Utc.from_utc_datetime(&naive))
}

/// Read one archive file into one record per column.
///
/// The file must be whitespace-delimited numeric text with a constant column
/// count and exactly 20480 rows; the record timestamp comes from the file
/// name and the sampling rate is fixed at 20480 Hz. Channels are labeled
/// `ch1`, `ch2`, … in column order.
pub fn read_ims_record(path: &Path) -> Result<Vec<VibrationRecord>> {
    let timestamp = filename_timestamp(path)?;
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);
    let mut columns: Vec<Vec<f64>> = Vec::new();
    let mut rows = 0usize;
    for (index, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let values: Vec<f64> = line
            .split_whitespace()
            .map(|tok| {
                tok.parse::<f64>().map_err(|_| Error::Parse {
                    path: path.to_path_buf(),
                    line: index + 1,
                    message: format!("not a number: {tok:?}"),
                })
            })
            .collect::<Result<_>>()?;
        if columns.is_empty() {
            columns = vec![Vec::with_capacity(IMS_SAMPLES_PER_FILE); values.len()];
        } else if values.len() != columns.len() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: index + 1,
                message: format!("expected {} columns, found {}", columns.len(), values.len()),
            });
        }
        for (col, v) in columns.iter_mut().zip(values) {
            col.push(v);
        }
        rows += 1;
    }
    if rows != IMS_SAMPLES_PER_FILE {
        return Err(Error::Parse {
            path: path.to_path_buf(),
            line: rows,
            message: format!("expected {IMS_SAMPLES_PER_FILE} rows, found {rows}"),
        });
    }
    columns
        .into_iter()
        .enumerate()
        .map(|(i, samples)| {
            VibrationRecord::new(timestamp, IMS_SAMPLING_RATE_HZ, samples, format!("ch{}", i + 1))
        })
        .collect()
}

/// Scan a run directory: discover record files, sort them by their
/// filename-encoded timestamps, and read the layout off the first file.
/// A directory with no record files is an ingestion error.
pub fn scan_run_directory(path: &Path) -> Result<RunDirectory> {
    let entries = fs::read_dir(path).map_err(|e| Error::io(path, e))?;
    let mut records = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(path, e))?;
        let file_path = entry.path();
        let name = entry.file_name();
        let name = name.to_string_lossy();
        if !file_path.is_file() || name.starts_with('.') {
            continue;
        }
        records.push(RecordRef {
            timestamp: filename_timestamp(&file_path)?,
            path: file_path,
        });
    }
    if records.is_empty() {
        return Err(Error::RejectedInput(format!(
            "run directory {} contains no record files",
            path.display()
        )));
    }
    records.sort_by(|a, b| a.timestamp.cmp(&b.timestamp).then(a.path.cmp(&b.path)));

    let first = fs::File::open(&records[0].path).map_err(|e| Error::io(&records[0].path, e))?;
    let mut reader = BufReader::new(first);
    let mut first_line = String::new();
    reader
        .read_line(&mut first_line)
        .map_err(|e| Error::io(&records[0].path, e))?;
    let channels_per_file = first_line.split_whitespace().count();
    let samples_per_file = 1 + reader.lines().filter(|l| match l {
        Ok(text) => !text.trim().is_empty(),
        Err(_) => true,
    }).count();
    Ok(RunDirectory {
        path: path.to_path_buf(),
        records,
        channels_per_file,
        samples_per_file,
    })
}

/// Load one channel of every file in a run directory as a measurement run.
/// `channel` is zero-based.
pub fn load_channel_run(run: &RunDirectory, channel: usize) -> Result<MeasurementRun> {
    if channel >= run.channels_per_file {
        return Err(Error::Config(format!(
            "channel {channel} out of range, files have {} channels",
            run.channels_per_file
        )));
    }
    let mut records = Vec::with_capacity(run.records.len());
    for record_ref in &run.records {
        let mut channels = read_ims_record(&record_ref.path)?;
        records.push(channels.swap_remove(channel));
    }
    MeasurementRun::new(records)
}

// --- synthetic fault signals ----------------------------------------------

/// Recipe for a synthetic bearing-fault signal: an impulse train at the
/// fault frequency (inter-arrival jittered by `slip`), each impulse ringing
/// an exponentially decaying sinusoid at the resonance frequency, plus
/// Gaussian noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SyntheticFaultSpec {
    /// Fault repetition rate, Hz; must sit below Nyquist.
    pub fault_frequency_hz: f64,
    /// Structural resonance the impacts excite, Hz; below Nyquist.
    pub resonance_frequency_hz: f64,
    /// Ring-down decay rate of each impact, 1/s.
    pub impulse_decay_per_s: f64,
    /// Peak amplitude of each impact; 0 silences the fault.
    pub impulse_amplitude: f64,
    /// Standard deviation of the additive Gaussian noise, g.
    pub noise_std: f64,
    /// Relative inter-arrival jitter, a fraction in [0, 1).
    pub slip: f64,
    /// Signal duration, seconds.
    pub duration_seconds: f64,
    /// Sampling rate, Hz.
    pub sampling_rate_hz: f64,
    /// Seed for the jitter and noise; equal seeds give equal records.
    pub seed: u64,
}

impl Default for SyntheticFaultSpec {
    fn default() -> Self {
        SyntheticFaultSpec {
            fault_frequency_hz: 236.0,
            resonance_frequency_hz: 4000.0,
            impulse_decay_per_s: 800.0,
            impulse_amplitude: 1.0,
            noise_std: 0.1,
            slip: 0.005,
            duration_seconds: 1.0,
            sampling_rate_hz: 20480.0,
            seed: 0,
        }
    }
}

impl SyntheticFaultSpec {
    fn validate(&self) -> Result<()> {
        let nyquist = self.sampling_rate_hz / 2.0;
        if !(self.sampling_rate_hz > 0.0) || !self.sampling_rate_hz.is_finite() {
            return Err(Error::Config(format!(
                "sampling rate must be positive, got {}",
                self.sampling_rate_hz
            )));
        }
        if !(self.fault_frequency_hz > 0.0) || self.fault_frequency_hz >= nyquist {
            return Err(Error::Config(format!(
                "fault frequency {} Hz must lie in (0, {nyquist}) Hz",
                self.fault_frequency_hz
            )));
        }
        if !(self.resonance_frequency_hz > 0.0) || self.resonance_frequency_hz >= nyquist {
            return Err(Error::Config(format!(
                "resonance frequency {} Hz must lie in (0, {nyquist}) Hz",
                self.resonance_frequency_hz
            )));
        }
        if !(0.0..1.0).contains(&self.slip) {
            return Err(Error::Config(format!(
                "slip must be a fraction in [0, 1), got {}",
                self.slip
            )));
        }
        if !(self.duration_seconds > 0.0) {
            return Err(Error::Config(format!(
                "duration must be positive, got {} s",
                self.duration_seconds
            )));
        }
        if !(self.noise_std >= 0.0) || !(self.impulse_decay_per_s > 0.0) {
            return Err(Error::Config(
                "noise std must be nonnegative and impulse decay positive".into(),
            ));
        }
        Ok(())
    }
}

/// Timestamp stamped on synthetic records; callers re-stamp as needed.
pub fn default_synthetic_timestamp() -> DateTime<Utc> {
    Utc.with_ymd_and_hms(2004, 2, 12, 0, 0, 0).unwrap()
}

/// Generate one synthetic fault record from a spec, deterministically per
/// seed. Amplitudes are linear in `impulse_amplitude`, so doubling it
/// doubles every envelope-spectrum line.
pub fn synthesize_fault_signal(spec: &SyntheticFaultSpec) -> Result<VibrationRecord> {
    spec.validate()?;
    let fs = spec.sampling_rate_hz;
    let n = (spec.duration_seconds * fs).round() as usize;
    if n < 4 {
        return Err(Error::Config(format!(
            "duration {} s at {} Hz yields fewer than 4 samples",
            spec.duration_seconds, fs
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut samples = vec![0.0f64; n];

    if spec.impulse_amplitude != 0.0 {
        // each impact rings until the envelope has decayed to ~1e-6
        let ring_len = ((13.8 / spec.impulse_decay_per_s) * fs).ceil() as usize;
        let ring: Vec<f64> = (0..ring_len.min(n))
            .map(|i| {
                let t = i as f64 / fs;
                spec.impulse_amplitude
                    * (-spec.impulse_decay_per_s * t).exp()
                    * (std::f64::consts::TAU * spec.resonance_frequency_hz * t).sin()
            })
            .collect();
        let mean_gap = 1.0 / spec.fault_frequency_hz;
        let mut arrival = 0.0f64;
        while arrival < spec.duration_seconds {
            let start = (arrival * fs).round() as usize;
            for (offset, r) in ring.iter().enumerate() {
                let idx = start + offset;
                if idx >= n {
                    break;
                }
                samples[idx] += r;
            }
            let jitter = if spec.slip > 0.0 {
                1.0 + spec.slip * rng.gen_range(-1.0..1.0)
            } else {
                1.0
            };
            arrival += mean_gap * jitter;
        }
    }

    if spec.noise_std > 0.0 {
        let noise = Normal::new(0.0, spec.noise_std)
            .map_err(|e| Error::Config(format!("invalid noise distribution: {e}")))?;
        for s in &mut samples {
            *s += noise.sample(&mut rng);
        }
    }

    VibrationRecord::new(default_synthetic_timestamp(), fs, samples, "synth".to_string())
}

// --- feature tables -------------------------------------------------------

const TABLE_TIME_COLUMN: &str = "timestamp";

/// Write feature vectors as delimited text: a fixed header row, then one
/// row per vector with the timestamp and ten features at 17 significant
/// digits, enough for a bit-exact round trip.
pub fn write_feature_table(vectors: &[FeatureVector], path: &Path) -> Result<()> {
    if vectors.is_empty() {
        return Err(Error::RejectedInput(
            "refusing to write an empty feature table".into(),
        ));
    }
    let mut out = String::new();
    out.push_str(TABLE_TIME_COLUMN);
    for id in 1..=10 {
        out.push('\t');
        out.push_str(feature_name(id));
    }
    out.push('\n');
    for v in vectors {
        out.push_str(&v.timestamp.to_rfc3339_opts(SecondsFormat::AutoSi, true));
        for x in &v.values {
            out.push_str(&format!("\t{x:.16e}"));
        }
        out.push('\n');
    }
    let mut file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    file.write_all(out.as_bytes()).map_err(|e| Error::io(path, e))
}

/// Read a feature table written by [`write_feature_table`]. The header must
/// match the expected columns exactly; a mismatch is a schema error naming
/// the offending column.
pub fn read_feature_table(path: &Path) -> Result<Vec<FeatureVector>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut lines = text.lines().enumerate();
    let (_, header) = lines.next().ok_or_else(|| {
        Error::Schema(format!("{} is empty, expected a header row", path.display()))
    })?;
    let mut expected = vec![TABLE_TIME_COLUMN.to_string()];
    expected.extend((1..=10).map(|id| feature_name(id).to_string()));
    let found: Vec<&str> = header.split('\t').collect();
    for (i, want) in expected.iter().enumerate() {
        match found.get(i) {
            Some(got) if *got == want => {}
            Some(got) => {
                return Err(Error::Schema(format!(
                    "column {} is {got:?}, expected {want:?}",
                    i + 1
                )))
            }
            None => {
                return Err(Error::Schema(format!(
                    "missing column {want:?} in {}",
                    path.display()
                )))
            }
        }
    }
    if found.len() > expected.len() {
        return Err(Error::Schema(format!(
            "unexpected extra column {:?}",
            found[expected.len()]
        )));
    }

    let mut vectors = Vec::new();
    for (index, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != expected.len() {
            return Err(Error::Parse {
                path: path.to_path_buf(),
                line: index + 1,
                message: format!("expected {} fields, found {}", expected.len(), fields.len()),
            });
        }
        let timestamp = DateTime::parse_from_rfc3339(fields[0])
            .map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                line: index + 1,
                message: format!("bad timestamp {:?}: {e}", fields[0]),
            })?
            .with_timezone(&Utc);
        let mut values = [0.0f64; 10];
        for (slot, tok) in values.iter_mut().zip(&fields[1..]) {
            *slot = tok.parse::<f64>().map_err(|_| Error::Parse {
                path: path.to_path_buf(),
                line: index + 1,
                message: format!("not a number: {tok:?}"),
            })?;
        }
        vectors.push(FeatureVector { timestamp, values });
    }
    if vectors.is_empty() {
        return Err(Error::Schema(format!(
            "{} has a header but no data rows",
            path.display()
        )));
    }
    Ok(vectors)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectrum::squared_envelope_spectrum;
    use std::fs::File;

    fn write_lines(path: &Path, rows: usize, cols: usize) {
        let mut out = String::new();
        for i in 0..rows {
            let row: Vec<String> = (0..cols)
                .map(|c| format!("{}", ((i * cols + c) as f64).sin() * 0.25))
                .collect();
            out.push_str(&row.join("\t"));
            out.push('\n');
        }
        fs::write(path, out).unwrap();
    }

    fn ses_argmax(record: &VibrationRecord) -> (f64, f64) {
        let ses = squared_envelope_spectrum(&record.samples, record.sampling_rate_hz).unwrap();
        let mut best = (0.0, 0.0);
        for (f, a) in ses.frequencies_hz.iter().zip(&ses.amplitudes) {
            if *a > best.1 {
                best = (*f, *a);
            }
        }
        best
    }

    // --- archive files ---

    #[test]
    fn archive_file_parses_one_record_per_column() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("2004.02.12.10.32.39");
        write_lines(&path, IMS_SAMPLES_PER_FILE, 8);
        let records = read_ims_record(&path).unwrap();
        assert_eq!(records.len(), 8);
        for (i, r) in records.iter().enumerate() {
            assert_eq!(r.samples.len(), IMS_SAMPLES_PER_FILE);
            assert_eq!(r.sampling_rate_hz, IMS_SAMPLING_RATE_HZ);
            assert_eq!(r.channel_id, format!("ch{}", i + 1));
            assert_eq!(
                r.timestamp,
                Utc.with_ymd_and_hms(2004, 2, 12, 10, 32, 39).unwrap()
            );
        }
        // amplitudes arrive unscaled
        assert_eq!(records[0].samples[0], 0.0);
        assert_eq!(records[1].samples[0], (1.0f64).sin() * 0.25);
    }

    #[test]
    fn short_file_is_a_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("2004.02.12.10.32.39");
        write_lines(&path, 100, 4);
        match read_ims_record(&path) {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 100);
                assert!(message.contains("20480"), "message: {message}");
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn jagged_row_is_a_parse_error_with_its_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("2004.02.12.10.32.39");
        fs::write(&path, "0.1\t0.2\n0.3\n").unwrap();
        match read_ims_record(&path) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn non_numeric_token_is_a_parse_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("2004.02.12.10.32.39");
        fs::write(&path, "0.1\t0.2\n0.3\tbogus\n").unwrap();
        match read_ims_record(&path) {
            Err(Error::Parse { line, message, .. }) => {
                assert_eq!(line, 2);
                assert!(message.contains("bogus"));
            }
            other => panic!("expected a parse error, got {other:?}"),
        }
    }

    #[test]
    fn bad_filename_is_a_timestamp_error() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("notes.txt");
        fs::write(&path, "0.1\n").unwrap();
        assert!(matches!(read_ims_record(&path), Err(Error::Timestamp(_))));
    }

    // --- directory scans ---

    #[test]
    fn scan_sorts_by_encoded_timestamp() {
        let dir = tempfile::tempdir().unwrap();
        for name in [
            "2004.02.13.01.02.03",
            "2004.02.12.23.59.59",
            "2004.02.12.10.00.00",
        ] {
            write_lines(&dir.path().join(name), 5, 2);
        }
        File::create(dir.path().join(".hidden")).unwrap();
        let scanned = scan_run_directory(dir.path()).unwrap();
        assert_eq!(scanned.records.len(), 3);
        assert!(scanned
            .records
            .windows(2)
            .all(|w| w[0].timestamp < w[1].timestamp));
        assert_eq!(scanned.channels_per_file, 2);
        assert_eq!(scanned.samples_per_file, 5);
    }

    #[test]
    fn empty_directory_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            scan_run_directory(dir.path()),
            Err(Error::RejectedInput(_))
        ));
    }

    #[test]
    fn channel_loading_respects_the_column_index() {
        let dir = tempfile::tempdir().unwrap();
        for name in ["2004.02.12.10.00.00", "2004.02.12.10.10.00"] {
            let mut out = String::new();
            for i in 0..IMS_SAMPLES_PER_FILE {
                out.push_str(&format!("{}\t{}\n", i as f64 * 1e-6, -(i as f64) * 1e-6));
            }
            fs::write(dir.path().join(name), out).unwrap();
        }
        let scanned = scan_run_directory(dir.path()).unwrap();
        let run = load_channel_run(&scanned, 1).unwrap();
        assert_eq!(run.len(), 2);
        assert!(run.records[0].samples[100] < 0.0);
        assert!(matches!(
            load_channel_run(&scanned, 2),
            Err(Error::Config(_))
        ));
    }

    // --- synthetic signals ---

    #[test]
    fn same_seed_gives_identical_records() {
        let spec = SyntheticFaultSpec::default();
        let a = synthesize_fault_signal(&spec).unwrap();
        let b = synthesize_fault_signal(&spec).unwrap();
        assert_eq!(a.samples, b.samples);
        let c = synthesize_fault_signal(&SyntheticFaultSpec { seed: 1, ..spec }).unwrap();
        assert_ne!(a.samples, c.samples);
    }

    #[test]
    fn envelope_peak_sits_at_the_fault_frequency() {
        let spec = SyntheticFaultSpec {
            noise_std: 0.0,
            slip: 0.0,
            ..SyntheticFaultSpec::default()
        };
        let record = synthesize_fault_signal(&spec).unwrap();
        let (freq, _) = ses_argmax(&record);
        let bin = record.sampling_rate_hz / record.samples.len() as f64;
        assert!(
            (freq - 236.0).abs() <= bin + 1e-9,
            "peak at {freq} Hz, expected 236 ± {bin}"
        );
    }

    #[test]
    fn peak_location_ignores_the_resonance_frequency() {
        for resonance in [2000.0, 4000.0, 7000.0] {
            let spec = SyntheticFaultSpec {
                resonance_frequency_hz: resonance,
                noise_std: 0.0,
                slip: 0.0,
                ..SyntheticFaultSpec::default()
            };
            let record = synthesize_fault_signal(&spec).unwrap();
            let (freq, _) = ses_argmax(&record);
            let bin = record.sampling_rate_hz / record.samples.len() as f64;
            assert!((freq - 236.0).abs() <= bin + 1e-9, "resonance {resonance}");
        }
    }

    #[test]
    fn doubling_the_impulse_amplitude_doubles_the_envelope_peak() {
        let spec = SyntheticFaultSpec {
            noise_std: 0.0,
            ..SyntheticFaultSpec::default()
        };
        let envelope_peak = |record: &VibrationRecord| {
            let env = crate::spectrum::envelope(&record.samples).unwrap();
            let spectrum = crate::spectrum::real_spectrum(&env, record.sampling_rate_hz).unwrap();
            spectrum.amplitudes[1..] // skip the envelope's large DC line
                .iter()
                .cloned()
                .fold(0.0, f64::max)
        };
        let single = synthesize_fault_signal(&spec).unwrap();
        let double = synthesize_fault_signal(&SyntheticFaultSpec {
            impulse_amplitude: 2.0,
            ..spec
        })
        .unwrap();
        let ratio = envelope_peak(&double) / envelope_peak(&single);
        assert!((ratio - 2.0).abs() < 0.02, "ratio {ratio}");
        // the squared envelope is quadratic in the signal, so its line
        // quadruples instead
        let (_, a1) = ses_argmax(&single);
        let (_, a2) = ses_argmax(&double);
        assert!((a2 / a1 - 4.0).abs() < 0.04, "squared ratio {}", a2 / a1);
    }

    #[test]
    fn silent_spec_yields_an_all_zero_record() {
        let spec = SyntheticFaultSpec {
            impulse_amplitude: 0.0,
            noise_std: 0.0,
            ..SyntheticFaultSpec::default()
        };
        let record = synthesize_fault_signal(&spec).unwrap();
        assert!(record.samples.iter().all(|s| *s == 0.0));
    }

    #[test]
    fn out_of_band_frequencies_are_rejected() {
        let base = SyntheticFaultSpec::default();
        for bad in [
            SyntheticFaultSpec {
                fault_frequency_hz: 11000.0,
                ..base
            },
            SyntheticFaultSpec {
                resonance_frequency_hz: 10240.0,
                ..base
            },
            SyntheticFaultSpec { slip: 1.0, ..base },
            SyntheticFaultSpec {
                duration_seconds: 0.0,
                ..base
            },
        ] {
            assert!(synthesize_fault_signal(&bad).is_err());
        }
    }

    // --- feature tables ---

    fn random_vectors(count: usize, seed: u64) -> Vec<FeatureVector> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let t0 = Utc.with_ymd_and_hms(2004, 2, 12, 0, 0, 0).unwrap();
        (0..count)
            .map(|i| {
                let mut values = [0.0f64; 10];
                for v in &mut values {
                    // wide dynamic range to stress the decimal encoding
                    *v = rng.gen_range(-1.0..1.0) * 10f64.powi(rng.gen_range(-12..12));
                }
                FeatureVector {
                    timestamp: t0 + chrono::Duration::seconds(600 * i as i64),
                    values,
                }
            })
            .collect()
    }

    #[test]
    fn feature_table_round_trips_bit_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("features.tsv");
        let vectors = random_vectors(100, 5);
        write_feature_table(&vectors, &path).unwrap();
        let back = read_feature_table(&path).unwrap();
        assert_eq!(vectors.len(), back.len());
        for (a, b) in vectors.iter().zip(&back) {
            assert_eq!(a.timestamp, b.timestamp);
            for (x, y) in a.values.iter().zip(&b.values) {
                assert_eq!(x.to_bits(), y.to_bits(), "{x} vs {y}");
            }
        }
    }

    #[test]
    fn empty_write_and_empty_read_are_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("features.tsv");
        assert!(write_feature_table(&[], &path).is_err());
        fs::write(&path, "").unwrap();
        assert!(matches!(read_feature_table(&path), Err(Error::Schema(_))));
    }

    #[test]
    fn header_mismatch_names_the_column() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("features.tsv");
        let vectors = random_vectors(3, 9);
        write_feature_table(&vectors, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        let doctored = text.replacen("rms", "mrs", 1);
        fs::write(&path, doctored).unwrap();
        match read_feature_table(&path) {
            Err(Error::Schema(message)) => {
                assert!(message.contains("mrs"), "message: {message}");
                assert!(message.contains("rms"), "message: {message}");
            }
            other => panic!("expected a schema error, got {other:?}"),
        }
    }
}
