//! Vibration feature extraction: eight statistical time-domain features plus
//! two envelope-spectrum amplitudes at a characteristic defect frequency
//! (raw signal and best wavelet band).
//!
//! ```
//! use tribotron_core::features::time_domain_features;
//!
//! let fs = 1024.0;
//! let x: Vec<f64> = (0..1024)
//!     .map(|n| 3.0 * (2.0 * std::f64::consts::PI * 128.0 * n as f64 / fs).cos())
//!     .collect();
//! let f = time_domain_features(&x).unwrap();
//! assert!((f[0] - 3.0 / f64::sqrt(2.0)).abs() < 1e-9); // RMS of a sine
//! ```

use chrono::{DateTime, Utc};

use crate::asset::MetaParameters;
use crate::bearing::FaultFrequencies;
use crate::detect::{peak_amplitude_near, DEFAULT_FREQUENCY_TOLERANCE};
use crate::error::{Error, Result};
use crate::signal::VibrationRecord;
use crate::spectrum::{squared_envelope_spectrum, Spectrum};
use crate::wavelet::wavelet_decompose;

/// Guard added inside logarithms against log(0).
const LOG_GUARD: f64 = 1e-12;

/// Number of features in a full vector.
pub const FEATURE_COUNT: usize = 10;

/// Human-readable name for a 1-based feature id.
pub fn feature_name(id: usize) -> &'static str {
    match id {
        1 => "rms",
        2 => "crest_factor",
        3 => "shape_factor",
        4 => "impulse_factor",
        5 => "shannon_entropy",
        6 => "log_energy_entropy",
        7 => "skewness",
        8 => "kurtosis",
        9 => "envelope_amplitude",
        10 => "wavelet_envelope_amplitude",
        _ => panic!("feature id {id} out of range 1..=10"),
    }
}

// --- statistical time-domain features -------------------------------------

/// Root mean square.
pub fn rms(x: &[f64]) -> f64 {
    (x.iter().map(|v| v * v).sum::<f64>() / x.len() as f64).sqrt()
}

fn peak_abs(x: &[f64]) -> f64 {
    x.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

fn mean_abs(x: &[f64]) -> f64 {
    x.iter().map(|v| v.abs()).sum::<f64>() / x.len() as f64
}

/// Crest factor: peak over RMS.
pub fn crest_factor(x: &[f64]) -> f64 {
    peak_abs(x) / rms(x)
}

/// Shape factor: RMS over mean absolute value.
pub fn shape_factor(x: &[f64]) -> f64 {
    rms(x) / mean_abs(x)
}

/// Impulse factor: peak over mean absolute value.
pub fn impulse_factor(x: &[f64]) -> f64 {
    peak_abs(x) / mean_abs(x)
}

/// Shannon entropy of the energy distribution `p_i = x_i²/Σx²`, in nats,
/// with `0·log 0 := 0`.
pub fn shannon_entropy(x: &[f64]) -> f64 {
    let total: f64 = x.iter().map(|v| v * v).sum();
    x.iter()
        .map(|v| {
            let p = v * v / total;
            if p > 0.0 {
                -p * p.ln()
            } else {
                0.0
            }
        })
        .sum()
}

/// Log-energy entropy: `Σ ln(x_i² + guard)`.
pub fn log_energy_entropy(x: &[f64]) -> f64 {
    x.iter().map(|v| (v * v + LOG_GUARD).ln()).sum()
}

fn central_moments(x: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mean = x.iter().sum::<f64>() / n;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for v in x {
        let d = v - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    (m2 / n, m3 / n, m4 / n)
}

/// Skewness `m3 / m2^1.5` (0 for a constant signal).
pub fn skewness(x: &[f64]) -> f64 {
    let (m2, m3, _) = central_moments(x);
    if m2 == 0.0 {
        0.0
    } else {
        m3 / m2.powf(1.5)
    }
}

/// Non-excess kurtosis `m4 / m2²` (Gaussian → 3; 0 for a constant signal).
pub fn kurtosis(x: &[f64]) -> f64 {
    let (m2, _, m4) = central_moments(x);
    if m2 == 0.0 {
        0.0
    } else {
        m4 / (m2 * m2)
    }
}

/// Features 1–8 in id order: RMS, crest, shape, impulse, Shannon entropy,
/// log-energy entropy, skewness, kurtosis.
///
/// Rejects empty, non-finite, and all-zero signals (shape and impulse
/// factors are undefined at zero energy).
pub fn time_domain_features(samples: &[f64]) -> Result<[f64; 8]> {
    if samples.is_empty() {
        return Err(Error::RejectedInput("empty sample buffer".into()));
    }
    if samples.iter().any(|v| !v.is_finite()) {
        return Err(Error::RejectedInput(
            "samples contain non-finite values".into(),
        ));
    }
    if samples.iter().all(|v| *v == 0.0) {
        return Err(Error::DegenerateSignal(
            "all-zero signal has no defined shape or impulse factor".into(),
        ));
    }
    Ok([
        rms(samples),
        crest_factor(samples),
        shape_factor(samples),
        impulse_factor(samples),
        shannon_entropy(samples),
        log_energy_entropy(samples),
        skewness(samples),
        kurtosis(samples),
    ])
}

// --- envelope-spectrum features -------------------------------------------

/// Envelope-spectrum amplitude at `fault_freq_hz` for every wavelet band
/// signal, level 1 (highest band) first.
pub fn wavelet_envelope_amplitudes(
    record: &VibrationRecord,
    fault_freq_hz: f64,
    meta: &MetaParameters,
) -> Result<Vec<f64>> {
    let dec = wavelet_decompose(
        &record.samples,
        record.sampling_rate_hz,
        &meta.mother_wavelet,
        meta.n_decomposition_levels,
    )?;
    let mut amps = Vec::with_capacity(dec.n_levels());
    for band in &dec.details {
        let ses = squared_envelope_spectrum(band, record.sampling_rate_hz)?;
        amps.push(peak_amplitude_near(&ses, fault_freq_hz, DEFAULT_FREQUENCY_TOLERANCE)?.0);
    }
    Ok(amps)
}

/// A complete feature vector: values keyed by feature id 1–10 plus the
/// measurement timestamp.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureVector {
    /// Measurement instant the features describe.
    pub timestamp: DateTime<Utc>,
    /// Feature values; index `i` holds feature id `i + 1`.
    pub values: [f64; FEATURE_COUNT],
}

/// All ten features of one record against a single defect frequency:
/// features 1–8 from the time domain, feature 9 the envelope-spectrum
/// amplitude at the defect frequency, feature 10 the maximum of the same
/// amplitude over all wavelet band signals.
pub fn extract_all_features(
    record: &VibrationRecord,
    fault_freq_hz: f64,
    meta: &MetaParameters,
) -> Result<FeatureVector> {
    let base = time_domain_features(&record.samples)?;
    let ses = squared_envelope_spectrum(&record.samples, record.sampling_rate_hz)?;
    let raw_amp = peak_amplitude_near(&ses, fault_freq_hz, DEFAULT_FREQUENCY_TOLERANCE)?.0;
    let wavelet_amp = wavelet_envelope_amplitudes(record, fault_freq_hz, meta)?
        .into_iter()
        .fold(0.0, f64::max);
    let mut values = [0.0; FEATURE_COUNT];
    values[..8].copy_from_slice(&base);
    values[8] = raw_amp;
    values[9] = wavelet_amp;
    Ok(FeatureVector {
        timestamp: record.timestamp,
        values,
    })
}

// --- shared per-record pipeline row ---------------------------------------

/// Defect-frequency targets a row carries amplitudes for, in fixed order.
pub const TARGET_COUNT: usize = 3;

/// Everything detection and degradation tracking need from one record,
/// computed in a single pass: time-domain features, per-target envelope
/// amplitudes (raw and best wavelet band), and the global envelope-spectrum
/// maximum used for baseline alarms.
///
/// Target index order is BPFI, BPFO, 2·BSF throughout.
#[derive(Debug, Clone, PartialEq)]
pub struct FeatureRow {
    /// Measurement instant.
    pub timestamp: DateTime<Utc>,
    /// Features 1–8 in id order.
    pub base: [f64; 8],
    /// Envelope-spectrum amplitude at each target frequency, raw signal.
    pub raw_envelope_amp: [f64; TARGET_COUNT],
    /// Maximum envelope-spectrum amplitude at each target over wavelet bands.
    pub wavelet_envelope_amp: [f64; TARGET_COUNT],
    /// Global maximum of the raw envelope spectrum (for baseline alarms).
    pub envelope_spectrum_max: f64,
}

impl FeatureRow {
    /// Target frequencies in row order (BPFI, BPFO, 2·BSF).
    pub fn target_frequencies(freqs: &FaultFrequencies) -> [f64; TARGET_COUNT] {
        [freqs.bpfi, freqs.bpfo, freqs.bsf_harmonic()]
    }

    /// The full 10-feature vector with features 9–10 taken at `target`
    /// (an index into the row's target order).
    pub fn feature_values(&self, target: usize) -> [f64; FEATURE_COUNT] {
        let mut values = [0.0; FEATURE_COUNT];
        values[..8].copy_from_slice(&self.base);
        values[8] = self.raw_envelope_amp[target];
        values[9] = self.wavelet_envelope_amp[target];
        values
    }

    /// Best amplitude for a target: raw or wavelet path, whichever is larger.
    pub fn best_amplitude(&self, target: usize) -> f64 {
        self.raw_envelope_amp[target].max(self.wavelet_envelope_amp[target])
    }
}

/// Extract a [`FeatureRow`], sharing one envelope spectrum and one wavelet
/// decomposition across all three defect-frequency targets.
pub fn extract_row(
    record: &VibrationRecord,
    freqs: &FaultFrequencies,
    meta: &MetaParameters,
) -> Result<FeatureRow> {
    let base = time_domain_features(&record.samples)?;
    let ses = squared_envelope_spectrum(&record.samples, record.sampling_rate_hz)?;
    let dec = wavelet_decompose(
        &record.samples,
        record.sampling_rate_hz,
        &meta.mother_wavelet,
        meta.n_decomposition_levels,
    )?;
    let band_spectra: Result<Vec<Spectrum>> = dec
        .details
        .iter()
        .map(|band| squared_envelope_spectrum(band, record.sampling_rate_hz))
        .collect();
    let band_spectra = band_spectra?;

    let targets = FeatureRow::target_frequencies(freqs);
    let mut raw_amp = [0.0f64; TARGET_COUNT];
    let mut wavelet_amp = [0.0f64; TARGET_COUNT];
    for (t, &freq) in targets.iter().enumerate() {
        raw_amp[t] = peak_amplitude_near(&ses, freq, DEFAULT_FREQUENCY_TOLERANCE)?.0;
        for band in &band_spectra {
            let amp = peak_amplitude_near(band, freq, DEFAULT_FREQUENCY_TOLERANCE)?.0;
            wavelet_amp[t] = wavelet_amp[t].max(amp);
        }
    }
    Ok(FeatureRow {
        timestamp: record.timestamp,
        base,
        raw_envelope_amp: raw_amp,
        wavelet_envelope_amp: wavelet_amp,
        envelope_spectrum_max: ses.max_amplitude(),
    })
}
