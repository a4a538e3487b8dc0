//! Fault detection from envelope spectra: peak search at characteristic
//! defect frequencies, steady-state baseline alarm levels, and the boolean
//! fault decision over raw and wavelet-band paths.

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::asset::MetaParameters;
use crate::bearing::FaultFrequencies;
use crate::error::{Error, Result};
use crate::features::{extract_row, FeatureRow, TARGET_COUNT};
use crate::signal::VibrationRecord;
use crate::spectrum::{squared_envelope_spectrum, Spectrum};

/// Default frequency search tolerance: ±2% of the target, a roller-slip
/// allowance.
pub const DEFAULT_FREQUENCY_TOLERANCE: f64 = 0.02;

/// Default number of leading records treated as the healthy steady state.
pub const DEFAULT_BASELINE_COUNT: usize = 50;

// --- peak search ----------------------------------------------------------

/// Largest local maximum of `spectrum` within `target · (1 ± tolerance)`,
/// returned as `(amplitude, located frequency)`.
///
/// When the window contains no local maximum (a flat or monotone stretch),
/// the largest bin in the window is returned instead, ties resolved toward
/// the window center. An empty window is a configuration error.
pub fn peak_amplitude_near(
    spectrum: &Spectrum,
    target_hz: f64,
    tolerance: f64,
) -> Result<(f64, f64)> {
    if !(tolerance > 0.0) {
        return Err(Error::Config(format!(
            "frequency tolerance must be positive, got {tolerance}"
        )));
    }
    let lo_hz = target_hz * (1.0 - tolerance);
    let hi_hz = target_hz * (1.0 + tolerance);
    let res = spectrum.resolution_hz;
    let first = ((lo_hz / res).ceil().max(0.0)) as usize;
    let last_candidate = (hi_hz / res).floor();
    if last_candidate < first as f64 || spectrum.is_empty() || first >= spectrum.len() {
        return Err(Error::Config(format!(
            "empty search window around {target_hz} Hz (±{:.1}%) on a grid of {} bins at {res} Hz",
            tolerance * 100.0,
            spectrum.len()
        )));
    }
    let last = (last_candidate as usize).min(spectrum.len() - 1);

    let amps = &spectrum.amplitudes;
    let is_local_max = |i: usize| {
        let left_ok = i == 0 || amps[i - 1] < amps[i];
        let right_ok = i + 1 == amps.len() || amps[i] >= amps[i + 1];
        left_ok && right_ok
    };
    let mut best: Option<usize> = None;
    for i in first..=last {
        if is_local_max(i) && best.is_none_or(|b| amps[i] > amps[b]) {
            best = Some(i);
        }
    }
    let idx = best.unwrap_or_else(|| {
        // fall back to the max bin, preferring the one nearest the target
        let mut pick = first;
        for i in first..=last {
            let closer =
                (i as f64 * res - target_hz).abs() < (pick as f64 * res - target_hz).abs();
            if amps[i] > amps[pick] || (amps[i] == amps[pick] && closer) {
                pick = i;
            }
        }
        pick
    });
    Ok((amps[idx], spectrum.frequencies_hz[idx]))
}

// --- baseline alarm -------------------------------------------------------

/// Steady-state alarm level from healthy baseline records: the configured
/// multiplier (default 3) times the mean over records of the maximum
/// envelope-spectrum amplitude.
pub fn steady_state_alarm_level(
    baseline: &[VibrationRecord],
    meta: &MetaParameters,
) -> Result<f64> {
    if baseline.is_empty() {
        return Err(Error::Config(
            "baseline alarm needs at least one steady-state record".into(),
        ));
    }
    let mut sum = 0.0;
    for record in baseline {
        sum += squared_envelope_spectrum(&record.samples, record.sampling_rate_hz)?
            .max_amplitude();
    }
    Ok(meta.alarm_level_fault * sum / baseline.len() as f64)
}

/// Same alarm rule applied to already-extracted feature rows.
pub fn alarm_level_from_rows(baseline: &[FeatureRow], multiplier: f64) -> Result<f64> {
    if baseline.is_empty() {
        return Err(Error::Config(
            "baseline alarm needs at least one steady-state row".into(),
        ));
    }
    let mean = baseline
        .iter()
        .map(|r| r.envelope_spectrum_max)
        .sum::<f64>()
        / baseline.len() as f64;
    Ok(multiplier * mean)
}

// --- fault decision -------------------------------------------------------

/// Characteristic frequency family a detection points at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FaultType {
    /// Inner-race passing frequency.
    #[serde(rename = "BPFI")]
    Bpfi,
    /// Outer-race passing frequency.
    #[serde(rename = "BPFO")]
    Bpfo,
    /// Roller defect, detected at twice the spin frequency.
    #[serde(rename = "BSF")]
    Bsf,
    /// Cage frequency (reported only, never a detection target here).
    #[serde(rename = "FTF")]
    Ftf,
    /// No fault detected.
    #[serde(rename = "none")]
    None,
}

impl std::fmt::Display for FaultType {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            FaultType::Bpfi => "BPFI",
            FaultType::Bpfo => "BPFO",
            FaultType::Bsf => "BSF",
            FaultType::Ftf => "FTF",
            FaultType::None => "none",
        })
    }
}

/// Fault types in row-target order (BPFI, BPFO, 2·BSF).
const TARGET_TYPES: [FaultType; TARGET_COUNT] = [FaultType::Bpfi, FaultType::Bpfo, FaultType::Bsf];

/// One record's detection verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FaultStatus {
    /// True when any target amplitude exceeds the alarm level.
    pub is_faulty: bool,
    /// Dominant target when faulty, [`FaultType::None`] otherwise.
    pub fault_type: FaultType,
    /// Best amplitude found across targets, raw and wavelet paths.
    pub detected_amplitude: f64,
    /// Alarm level the amplitude was compared against.
    pub alarm_level: f64,
    /// Timestamp of the examined record.
    pub detection_time: DateTime<Utc>,
}

/// Decide fault status from an extracted row.
///
/// Per target the better of the raw-signal and wavelet-band amplitudes
/// counts; the dominant target is the amplitude argmax. With one shared
/// alarm level, ranking by amplitude and by amplitude/alarm ratio coincide;
/// exact ties fall to the earlier target in BPFI, BPFO, BSF order.
pub fn detect_from_row(row: &FeatureRow, alarm_level: f64) -> FaultStatus {
    let mut best_target = 0;
    for t in 1..TARGET_COUNT {
        if row.best_amplitude(t) > row.best_amplitude(best_target) {
            best_target = t;
        }
    }
    let detected_amplitude = row.best_amplitude(best_target);
    let is_faulty = detected_amplitude > alarm_level;
    FaultStatus {
        is_faulty,
        fault_type: if is_faulty {
            TARGET_TYPES[best_target]
        } else {
            FaultType::None
        },
        detected_amplitude,
        alarm_level,
        detection_time: row.timestamp,
    }
}

/// Full single-record detection: extract envelope amplitudes over the raw
/// signal and every wavelet level, then apply the alarm rule.
pub fn detect_fault(
    record: &VibrationRecord,
    freqs: &FaultFrequencies,
    meta: &MetaParameters,
    alarm_level: f64,
) -> Result<FaultStatus> {
    if !(alarm_level > 0.0) {
        return Err(Error::Config(format!(
            "alarm level must be positive, got {alarm_level}"
        )));
    }
    let row = extract_row(record, freqs, meta)?;
    Ok(detect_from_row(&row, alarm_level))
}

// --- detection scans ------------------------------------------------------

/// Index of the first row whose best amplitude (raw or wavelet path, any
/// target) exceeds the alarm level.
pub fn first_detection(rows: &[FeatureRow], alarm_level: f64) -> Option<usize> {
    rows.iter()
        .position(|row| detect_from_row(row, alarm_level).is_faulty)
}

/// Index of the first row exceeding the alarm on the raw-signal path alone,
/// ignoring the wavelet bands.
pub fn first_detection_raw_only(rows: &[FeatureRow], alarm_level: f64) -> Option<usize> {
    rows.iter().position(|row| {
        row.raw_envelope_amp
            .iter()
            .any(|amp| *amp > alarm_level)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};
    use std::f64::consts::PI;

    fn spike_spectrum(len: usize, res: f64, spikes: &[(usize, f64)]) -> Spectrum {
        let mut amplitudes = vec![0.0; len];
        for &(bin, amp) in spikes {
            amplitudes[bin] = amp;
        }
        Spectrum {
            frequencies_hz: (0..len).map(|i| i as f64 * res).collect(),
            amplitudes,
            resolution_hz: res,
        }
    }

    fn record(samples: Vec<f64>, fs: f64) -> VibrationRecord {
        let ts = Utc.with_ymd_and_hms(2004, 2, 12, 10, 32, 39).unwrap();
        VibrationRecord::new(ts, fs, samples, "ch1").unwrap()
    }

    fn row_with_amps(raw: [f64; 3], wavelet: [f64; 3]) -> FeatureRow {
        FeatureRow {
            timestamp: Utc.with_ymd_and_hms(2004, 2, 12, 10, 32, 39).unwrap(),
            base: [1.0; 8],
            raw_envelope_amp: raw,
            wavelet_envelope_amp: wavelet,
            envelope_spectrum_max: raw.iter().cloned().fold(0.0, f64::max),
        }
    }

    // --- peak search ---

    #[test]
    fn exact_spike_is_found() {
        let spec = spike_spectrum(512, 1.0, &[(236, 2.0)]);
        let (amp, freq) = peak_amplitude_near(&spec, 236.0, 0.02).unwrap();
        assert_eq!((amp, freq), (2.0, 236.0));
    }

    #[test]
    fn slipped_spike_within_window_is_found() {
        // 240 Hz lies inside 236 · (1 ± 0.02) = [231.3, 240.7]
        let spec = spike_spectrum(512, 1.0, &[(240, 1.5)]);
        let (amp, freq) = peak_amplitude_near(&spec, 236.0, 0.02).unwrap();
        assert_eq!((amp, freq), (1.5, 240.0));
    }

    #[test]
    fn larger_local_maximum_wins() {
        let spec = spike_spectrum(512, 1.0, &[(233, 1.0), (239, 3.0)]);
        let (amp, freq) = peak_amplitude_near(&spec, 236.0, 0.02).unwrap();
        assert_eq!((amp, freq), (3.0, 239.0));
    }

    #[test]
    fn flat_spectrum_returns_the_window_center() {
        let spec = spike_spectrum(512, 1.0, &[]);
        let (amp, freq) = peak_amplitude_near(&spec, 236.0, 0.02).unwrap();
        assert_eq!(amp, 0.0);
        assert_eq!(freq, 236.0);
    }

    #[test]
    fn bad_windows_are_config_errors() {
        let spec = spike_spectrum(512, 1.0, &[]);
        // beyond the spectrum range
        assert!(matches!(
            peak_amplitude_near(&spec, 5000.0, 0.02),
            Err(Error::Config(_))
        ));
        // tolerance narrower than a bin on a coarse grid
        let coarse = spike_spectrum(32, 100.0, &[]);
        assert!(peak_amplitude_near(&coarse, 250.0, 0.001).is_err());
        // non-positive tolerance
        assert!(peak_amplitude_near(&spec, 236.0, 0.0).is_err());
    }

    // --- baseline alarm ---

    #[test]
    fn alarm_is_three_times_the_mean_maximum() {
        let rows = [
            row_with_amps([0.1, 0.0, 0.0], [0.0; 3]),
            row_with_amps([0.3, 0.0, 0.0], [0.0; 3]),
        ];
        let alarm = alarm_level_from_rows(&rows, 3.0).unwrap();
        assert!((alarm - 0.6).abs() < 1e-12);
        assert!(alarm_level_from_rows(&[], 3.0).is_err());
    }

    #[test]
    fn record_alarm_matches_directly_computed_maxima() {
        let fs = 20480.0;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut records = Vec::new();
        let mut maxima = Vec::new();
        for _ in 0..3 {
            let x: Vec<f64> = (0..4096)
                .map(|_| <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng))
                .collect();
            maxima.push(squared_envelope_spectrum(&x, fs).unwrap().max_amplitude());
            records.push(record(x, fs));
        }
        let meta = MetaParameters::default().normalize().unwrap();
        let alarm = steady_state_alarm_level(&records, &meta).unwrap();
        let expected = 3.0 * maxima.iter().sum::<f64>() / 3.0;
        assert!((alarm - expected).abs() < 1e-12);
    }

    // --- fault decision ---

    #[test]
    fn amplitudes_above_alarm_fire_with_the_right_type() {
        let row = row_with_amps([0.2, 1.4, 0.3], [0.1, 0.9, 0.2]);
        let status = detect_from_row(&row, 1.0);
        assert!(status.is_faulty);
        assert_eq!(status.fault_type, FaultType::Bpfo);
        assert_eq!(status.detected_amplitude, 1.4);

        let quiet = detect_from_row(&row, 2.0);
        assert!(!quiet.is_faulty);
        assert_eq!(quiet.fault_type, FaultType::None);
        assert_eq!(quiet.detected_amplitude, 1.4);
    }

    #[test]
    fn wavelet_path_counts_toward_detection() {
        let row = row_with_amps([0.2, 0.2, 0.2], [0.1, 1.8, 0.1]);
        let status = detect_from_row(&row, 1.0);
        assert!(status.is_faulty);
        assert_eq!(status.fault_type, FaultType::Bpfo);
    }

    #[test]
    fn exact_ties_prefer_bpfi_then_bpfo() {
        let row = row_with_amps([1.5, 1.5, 1.5], [0.0; 3]);
        assert_eq!(detect_from_row(&row, 1.0).fault_type, FaultType::Bpfi);
        let row = row_with_amps([0.1, 1.5, 1.5], [0.0; 3]);
        assert_eq!(detect_from_row(&row, 1.0).fault_type, FaultType::Bpfo);
    }

    #[test]
    fn lowering_the_alarm_never_unfires() {
        let row = row_with_amps([0.4, 0.9, 0.2], [0.3, 0.8, 0.1]);
        for alarm in [2.0, 1.0, 0.85, 0.5, 0.1] {
            let status = detect_from_row(&row, alarm);
            if alarm < 0.9 {
                assert!(status.is_faulty, "alarm {alarm}");
            }
            // once faulty at some level, every lower level stays faulty
        }
    }

    // --- end-to-end on synthetic signals ---

    fn am_signal(f_m: f64, f_c: f64, depth: f64, fs: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| {
                let t = i as f64 / fs;
                (1.0 + depth * (2.0 * PI * f_m * t).cos()) * (2.0 * PI * f_c * t).cos()
            })
            .collect()
    }

    fn za2115_freqs() -> FaultFrequencies {
        crate::bearing::compute_fault_frequencies(&crate::bearing::za2115(), 33.3).unwrap()
    }

    #[test]
    fn strong_outer_race_modulation_is_detected_as_bpfo() {
        let fs = 20480.0;
        let freqs = za2115_freqs();
        let meta = MetaParameters::default().normalize().unwrap();
        let rec = record(am_signal(freqs.bpfo, 7000.0, 0.8, fs, 5120), fs);
        let status = detect_fault(&rec, &freqs, &meta, 0.05).unwrap();
        assert!(status.is_faulty);
        assert_eq!(status.fault_type, FaultType::Bpfo);
        assert!(status.detected_amplitude > 0.5);
    }

    #[test]
    fn noise_below_the_alarm_stays_healthy() {
        let fs = 20480.0;
        let freqs = za2115_freqs();
        let meta = MetaParameters::default().normalize().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let x: Vec<f64> = (0..5120)
            .map(|_| <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng))
            .collect();
        let status = detect_fault(&record(x, fs), &freqs, &meta, 10.0).unwrap();
        assert!(!status.is_faulty);
        assert_eq!(status.fault_type, FaultType::None);
    }

    #[test]
    fn amplitude_scales_quadratically_with_the_signal() {
        // squared-envelope amplitudes go as k²; the decision is invariant
        // when the alarm is scaled alongside
        let fs = 20480.0;
        let freqs = za2115_freqs();
        let meta = MetaParameters::default().normalize().unwrap();
        let base = am_signal(freqs.bpfo, 7000.0, 0.8, fs, 5120);
        let scaled: Vec<f64> = base.iter().map(|v| 3.0 * v).collect();
        let s1 = detect_fault(&record(base, fs), &freqs, &meta, 0.05).unwrap();
        let s2 = detect_fault(&record(scaled, fs), &freqs, &meta, 0.05 * 9.0).unwrap();
        let ratio = s2.detected_amplitude / s1.detected_amplitude;
        assert!((ratio - 9.0).abs() < 1e-9, "ratio {ratio}");
        assert_eq!(s1.is_faulty, s2.is_faulty);
        assert_eq!(s1.fault_type, s2.fault_type);
    }

    #[test]
    fn baseline_records_do_not_alarm_themselves() {
        let fs = 20480.0;
        let freqs = za2115_freqs();
        let meta = MetaParameters::default().normalize().unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(31);
        let records: Vec<VibrationRecord> = (0..10)
            .map(|_| {
                let x: Vec<f64> = (0..4096)
                    .map(|_| {
                        <StandardNormal as Distribution<f64>>::sample(&StandardNormal, &mut rng)
                    })
                    .collect();
                record(x, fs)
            })
            .collect();
        let alarm = steady_state_alarm_level(&records, &meta).unwrap();
        for rec in &records {
            let status = detect_fault(rec, &freqs, &meta, alarm).unwrap();
            assert!(!status.is_faulty);
        }
    }

    #[test]
    fn band_limited_fault_favors_the_wavelet_path() {
        // Two carriers modulated in anti-phase at the defect rate: their raw
        // envelopes cancel the defect line, but the top wavelet band sees
        // only the 7 kHz carrier and keeps it.
        let fs = 20480.0;
        let freqs = za2115_freqs();
        let meta = MetaParameters::default().normalize().unwrap();
        let n = 5120;
        let f_m = freqs.bpfo;
        let x: Vec<f64> = (0..n)
            .map(|i| {
                let t = i as f64 / fs;
                let m = (2.0 * PI * f_m * t).cos();
                (1.0 + 0.6 * m) * (2.0 * PI * 7000.0 * t).cos()
                    + (1.0 - 0.6 * m) * (2.0 * PI * 3000.0 * t).cos()
            })
            .collect();
        let row = extract_row(&record(x, fs), &freqs, &meta).unwrap();
        let bpfo = 1;
        assert!(
            row.wavelet_envelope_amp[bpfo] > 5.0 * row.raw_envelope_amp[bpfo],
            "wavelet {} vs raw {}",
            row.wavelet_envelope_amp[bpfo],
            row.raw_envelope_amp[bpfo]
        );
    }

    // --- detection scans ---

    #[test]
    fn first_detection_scans_in_order() {
        let rows = vec![
            row_with_amps([0.1, 0.1, 0.1], [0.1, 0.1, 0.1]),
            row_with_amps([0.2, 0.2, 0.2], [0.2, 1.5, 0.2]),
            row_with_amps([2.0, 0.2, 0.2], [0.2, 1.5, 0.2]),
        ];
        assert_eq!(first_detection(&rows, 1.0), Some(1));
        assert_eq!(first_detection_raw_only(&rows, 1.0), Some(2));
        assert_eq!(first_detection(&rows, 5.0), None);
    }
}
