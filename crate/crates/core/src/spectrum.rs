//! Frequency-domain transforms: one-sided amplitude spectra, the analytic
//! signal, and the squared envelope spectrum.
//!
//! The envelope path is the diagnostic workhorse: periodic impacts buried
//! under a resonant carrier show up as lines at the impact rate in the
//! spectrum of the squared envelope.
//!
//! ```
//! use tribotron_core::spectrum::real_spectrum;
//!
//! let fs = 1024.0;
//! let x: Vec<f64> = (0..1024)
//!     .map(|n| 2.0 * (2.0 * std::f64::consts::PI * 100.0 * n as f64 / fs).cos())
//!     .collect();
//! let spec = real_spectrum(&x, fs).unwrap();
//! let peak = spec.amplitudes.iter().cloned().fold(0.0, f64::max);
//! assert!((peak - 2.0).abs() < 1e-9);
//! ```

use std::cell::RefCell;

use rustfft::num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

// --- FFT plumbing ---------------------------------------------------------

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn fft_forward(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_forward(buf.len()).process(buf));
}

fn fft_inverse(buf: &mut [Complex64]) {
    PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(buf.len()).process(buf));
    let scale = 1.0 / buf.len() as f64;
    for v in buf.iter_mut() {
        *v *= scale;
    }
}

// --- Spectrum -------------------------------------------------------------

/// A one-sided amplitude spectrum on a uniform frequency grid.
///
/// Amplitudes carry cosine-amplitude scaling: a pure tone of amplitude `A`
/// at a bin frequency produces a single bin of value `A`; a constant signal
/// `c` produces a DC bin of value `|c|`.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Bin center frequencies in Hz, starting at 0.
    pub frequencies_hz: Vec<f64>,
    /// Amplitude per bin (cosine-amplitude scaling).
    pub amplitudes: Vec<f64>,
    /// Grid spacing in Hz (sampling rate / transform length).
    pub resolution_hz: f64,
}

impl Spectrum {
    /// Number of bins.
    pub fn len(&self) -> usize {
        self.amplitudes.len()
    }

    /// True when the spectrum has no bins.
    pub fn is_empty(&self) -> bool {
        self.amplitudes.is_empty()
    }

    /// Largest amplitude over all bins (0 for an empty spectrum).
    pub fn max_amplitude(&self) -> f64 {
        self.amplitudes.iter().cloned().fold(0.0, f64::max)
    }
}

/// One-sided amplitude spectrum of a real signal.
///
/// Scaling: DC bin `|X_0|/N`, interior bins `2|X_k|/N`, and (for even `N`)
/// the Nyquist bin `|X_{N/2}|/N`, so bin values read directly as cosine
/// amplitudes. Requires at least 2 samples.
pub fn real_spectrum(samples: &[f64], sampling_rate_hz: f64) -> Result<Spectrum> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::RejectedInput(format!(
            "spectrum needs at least 2 samples, got {n}"
        )));
    }
    if !(sampling_rate_hz > 0.0) {
        return Err(Error::RejectedInput(format!(
            "sampling rate must be positive, got {sampling_rate_hz}"
        )));
    }
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fft_forward(&mut buf);

    let n_bins = n / 2 + 1;
    let resolution = sampling_rate_hz / n as f64;
    let mut frequencies = Vec::with_capacity(n_bins);
    let mut amplitudes = Vec::with_capacity(n_bins);
    for (k, bin) in buf.iter().take(n_bins).enumerate() {
        let single_sided = k == 0 || (n.is_multiple_of(2) && k == n / 2);
        let scale = if single_sided { 1.0 } else { 2.0 };
        frequencies.push(k as f64 * resolution);
        amplitudes.push(scale * bin.norm() / n as f64);
    }
    Ok(Spectrum {
        frequencies_hz: frequencies,
        amplitudes,
        resolution_hz: resolution,
    })
}

// --- Analytic signal and envelope -----------------------------------------

/// Analytic signal by the frequency-domain one-sided method: transform,
/// zero the negative-frequency half, double the positive half (DC and the
/// even-length Nyquist bin kept single), transform back.
pub fn analytic_signal(samples: &[f64]) -> Result<Vec<Complex64>> {
    let n = samples.len();
    if n < 4 {
        return Err(Error::RejectedInput(format!(
            "analytic signal needs at least 4 samples, got {n}"
        )));
    }
    let mut buf: Vec<Complex64> = samples.iter().map(|&x| Complex64::new(x, 0.0)).collect();
    fft_forward(&mut buf);
    let half = n / 2;
    for (k, bin) in buf.iter_mut().enumerate() {
        if k == 0 || (n.is_multiple_of(2) && k == half) {
            // DC and Nyquist stay as they are.
        } else if k < half || (!n.is_multiple_of(2) && k == half) {
            *bin *= 2.0;
        } else {
            *bin = Complex64::new(0.0, 0.0);
        }
    }
    fft_inverse(&mut buf);
    Ok(buf)
}

/// Envelope of a signal: magnitude of its analytic signal.
pub fn envelope(samples: &[f64]) -> Result<Vec<f64>> {
    Ok(analytic_signal(samples)?.iter().map(|z| z.norm()).collect())
}

/// Squared envelope spectrum: the one-sided amplitude spectrum of
/// `|analytic(x)|²` with the DC bin zeroed.
///
/// For a carrier amplitude-modulated as `(1 + k·cos(2π f_m t))`, the line at
/// `f_m` has amplitude `2k` and the one at `2 f_m` has `k²/2`.
pub fn squared_envelope_spectrum(samples: &[f64], sampling_rate_hz: f64) -> Result<Spectrum> {
    let squared: Vec<f64> = analytic_signal(samples)?
        .iter()
        .map(|z| z.norm_sqr())
        .collect();
    let mut spec = real_spectrum(&squared, sampling_rate_hz)?;
    spec.amplitudes[0] = 0.0;
    Ok(spec)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn tone(amplitude: f64, freq_hz: f64, fs: f64, n: usize) -> Vec<f64> {
        (0..n)
            .map(|i| amplitude * (2.0 * PI * freq_hz * i as f64 / fs).cos())
            .collect()
    }

    // --- one-sided scaling ---

    #[test]
    fn bin_tone_recovers_its_amplitude() {
        let fs = 20480.0;
        let n = 4096;
        let x = tone(3.25, 500.0, fs, n); // 500 Hz = bin 100 at 5 Hz resolution
        let spec = real_spectrum(&x, fs).unwrap();
        let bin = (500.0 / spec.resolution_hz).round() as usize;
        assert!((spec.amplitudes[bin] - 3.25).abs() < 1e-9);
        for (k, a) in spec.amplitudes.iter().enumerate() {
            if k != bin {
                assert!(*a < 1e-10 * 3.25, "leakage at bin {k}: {a}");
            }
        }
    }

    #[test]
    fn constant_signal_is_pure_dc() {
        let spec = real_spectrum(&[1.5; 64], 64.0).unwrap();
        assert!((spec.amplitudes[0] - 1.5).abs() < 1e-12);
        assert!(spec.amplitudes[1..].iter().all(|a| *a < 1e-12));
    }

    #[test]
    fn parseval_energy_matches_time_domain() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for &n in &[256usize, 1000, 4097] {
            let x: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
            let spec = real_spectrum(&x, 1000.0).unwrap();
            let time_energy: f64 = x.iter().map(|v| v * v).sum();
            let mut spec_energy = spec.amplitudes[0].powi(2);
            let last = spec.len() - 1;
            for (k, a) in spec.amplitudes.iter().enumerate().skip(1) {
                if n % 2 == 0 && k == last {
                    spec_energy += a * a;
                } else {
                    spec_energy += a * a / 2.0;
                }
            }
            spec_energy *= n as f64;
            let rel = (spec_energy - time_energy).abs() / time_energy;
            assert!(rel < 1e-9, "n = {n}: relative energy error {rel}");
        }
    }

    // --- analytic signal ---

    #[test]
    fn envelope_of_pure_tone_is_flat() {
        let x = tone(2.0, 640.0, 20480.0, 2048); // bin frequency
        let env = envelope(&x).unwrap();
        for e in env {
            assert!((e - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn analytic_signal_of_cosine_has_sine_quadrature() {
        let fs = 1024.0;
        let n = 1024;
        let x = tone(1.0, 100.0, fs, n);
        let a = analytic_signal(&x).unwrap();
        for (i, z) in a.iter().enumerate() {
            let phase = 2.0 * PI * 100.0 * i as f64 / fs;
            assert!((z.re - phase.cos()).abs() < 1e-9);
            assert!((z.im - phase.sin()).abs() < 1e-9);
        }
    }

    // --- squared envelope spectrum ---

    #[test]
    fn modulation_lines_have_the_derived_amplitudes() {
        // x = (1 + k cos(2π f_m t)) · cos(2π f_c t)
        // envelope² = (1 + k²/2) + 2k·cos(2π f_m t) + (k²/2)·cos(4π f_m t)
        let fs = 20480.0;
        let n = 20480;
        let (f_m, f_c, k) = (236.0, 4000.0, 0.5);
        let x: Vec<f64> = (0..n)
            .map(|i| {
                let t = i as f64 / fs;
                (1.0 + k * (2.0 * PI * f_m * t).cos()) * (2.0 * PI * f_c * t).cos()
            })
            .collect();
        let ses = squared_envelope_spectrum(&x, fs).unwrap();
        let bin = |f: f64| (f / ses.resolution_hz).round() as usize;
        assert!((ses.amplitudes[bin(f_m)] - 2.0 * k).abs() < 1e-9);
        assert!((ses.amplitudes[bin(2.0 * f_m)] - k * k / 2.0).abs() < 1e-9);
        // the f_m line dominates everything (DC already zeroed)
        let peak_bin = ses
            .amplitudes
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        assert_eq!(peak_bin, bin(f_m));
    }

    #[test]
    fn peak_bin_is_invariant_to_carrier_frequency() {
        let fs = 20480.0;
        let n = 20480;
        let f_m = 236.0;
        let mut peaks = Vec::new();
        for f_c in [3000.0, 7000.0] {
            let x: Vec<f64> = (0..n)
                .map(|i| {
                    let t = i as f64 / fs;
                    (1.0 + 0.4 * (2.0 * PI * f_m * t).cos()) * (2.0 * PI * f_c * t).cos()
                })
                .collect();
            let ses = squared_envelope_spectrum(&x, fs).unwrap();
            peaks.push(
                ses.amplitudes
                    .iter()
                    .enumerate()
                    .max_by(|a, b| a.1.total_cmp(b.1))
                    .unwrap()
                    .0,
            );
        }
        assert_eq!(peaks[0], peaks[1]);
        assert_eq!(peaks[0] as f64, 236.0); // 1 Hz bins
    }

    #[test]
    fn unmodulated_carrier_leaves_an_empty_envelope_spectrum() {
        let x = tone(1.0, 5000.0, 20480.0, 8192);
        let ses = squared_envelope_spectrum(&x, 20480.0).unwrap();
        assert!(ses.max_amplitude() < 1e-10);
    }

    #[test]
    fn short_inputs_are_rejected() {
        assert!(real_spectrum(&[1.0], 10.0).is_err());
        assert!(analytic_signal(&[1.0, 2.0, 3.0]).is_err());
        assert!(real_spectrum(&[1.0, 2.0], 0.0).is_err());
    }
}
