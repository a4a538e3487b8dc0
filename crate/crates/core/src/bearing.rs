//! Rolling-element bearing kinematics.
//!
//! A race or roller defect is struck at a rate fixed by the bearing geometry
//! and the shaft speed. Those characteristic fault frequencies (BPFO, BPFI,
//! BSF, FTF) are what the detection layer hunts for in envelope spectra.
//!
//! # Example
//!
//! ```
//! use tribotron_core::bearing::{BearingGeometry, compute_fault_frequencies};
//!
//! let geom = BearingGeometry {
//!     roller_count: 16,
//!     roller_diameter_mm: 8.4,
//!     pitch_diameter_mm: 71.5,
//!     contact_angle_deg: 15.17,
//! };
//! let f = compute_fault_frequencies(&geom, 33.3).unwrap();
//! assert!((f.bpfi + f.bpfo - 16.0 * 33.3).abs() < 1e-9);
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Geometry of one bearing row, the minimum data needed for kinematics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BearingGeometry {
    /// Number of rolling elements in the row.
    pub roller_count: u32,
    /// Rolling-element diameter in millimetres.
    pub roller_diameter_mm: f64,
    /// Pitch (cage) diameter in millimetres.
    pub pitch_diameter_mm: f64,
    /// Contact angle in degrees, `0 ≤ φ < 90`.
    pub contact_angle_deg: f64,
}

impl BearingGeometry {
    /// Check the geometric invariants; returns a rejected-input error naming
    /// the first violated one.
    pub fn validate(&self) -> Result<()> {
        if self.roller_count < 1 {
            return Err(Error::RejectedInput("roller count must be ≥ 1".into()));
        }
        if !(self.roller_diameter_mm > 0.0) {
            return Err(Error::RejectedInput(format!(
                "roller diameter must be positive, got {}",
                self.roller_diameter_mm
            )));
        }
        if !(self.pitch_diameter_mm > self.roller_diameter_mm) {
            return Err(Error::RejectedInput(format!(
                "pitch diameter ({}) must exceed roller diameter ({})",
                self.pitch_diameter_mm, self.roller_diameter_mm
            )));
        }
        if !(0.0..90.0).contains(&self.contact_angle_deg) {
            return Err(Error::RejectedInput(format!(
                "contact angle must be in [0°, 90°), got {}",
                self.contact_angle_deg
            )));
        }
        Ok(())
    }
}

/// Characteristic defect frequencies for one bearing at one shaft speed.
///
/// `bsf` is the kinematic ball-spin frequency itself; a roller defect strikes
/// both races per revolution, so detection targets `2 · bsf`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FaultFrequencies {
    /// Ball-pass frequency, inner race (Hz).
    pub bpfi: f64,
    /// Ball-pass frequency, outer race (Hz).
    pub bpfo: f64,
    /// Ball spin frequency (Hz).
    pub bsf: f64,
    /// Fundamental train (cage) frequency (Hz).
    pub ftf: f64,
    /// Shaft rotation rate the above were computed for (Hz).
    pub shaft_rate_hz: f64,
}

impl FaultFrequencies {
    /// Detection target for a rolling-element defect: one defect impacts both
    /// races per spin, so the envelope line appears at twice the spin rate.
    pub fn bsf_harmonic(&self) -> f64 {
        2.0 * self.bsf
    }
}

/// Compute the four characteristic fault frequencies from geometry and shaft
/// speed.
///
/// With `q = (d/D)·cos φ` and `a = (n/2)·f_r`:
///
/// * BPFO = `a·(1 − q)`
/// * BPFI = `a·(1 + q)`
/// * BSF  = `(D/2d)·f_r·(1 − q²)`
/// * FTF  = `(f_r/2)·(1 − q)`
///
/// The identity `BPFI + BPFO = n·f_r` holds to machine precision because both
/// terms share the single product `a·q`.
pub fn compute_fault_frequencies(
    geometry: &BearingGeometry,
    shaft_rate_hz: f64,
) -> Result<FaultFrequencies> {
    geometry.validate()?;
    if !(shaft_rate_hz > 0.0) {
        return Err(Error::RejectedInput(format!(
            "shaft rate must be positive, got {shaft_rate_hz}"
        )));
    }

    let n = f64::from(geometry.roller_count);
    let d = geometry.roller_diameter_mm;
    let big_d = geometry.pitch_diameter_mm;
    let phi = geometry.contact_angle_deg.to_radians();

    let q = (d / big_d) * phi.cos();
    let a = 0.5 * n * shaft_rate_hz;
    let p = a * q;

    Ok(FaultFrequencies {
        bpfi: a + p,
        bpfo: a - p,
        bsf: (big_d / (2.0 * d)) * shaft_rate_hz * (1.0 - q * q),
        ftf: 0.5 * shaft_rate_hz * (1.0 - q),
        shaft_rate_hz,
    })
}

/// Rexnord ZA-2115 double-row bearing, the run-to-failure test-rig fixture.
/// Geometry from the public dataset documentation.
#[cfg(test)]
pub(crate) fn za2115() -> BearingGeometry {
    BearingGeometry {
        roller_count: 16,
        roller_diameter_mm: 8.4,
        pitch_diameter_mm: 71.5,
        contact_angle_deg: 15.17,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // --- Reference values ---

    #[test]
    fn za2115_reference_frequencies() {
        // Hand evaluation of the closed forms at n=16, d=8.4, D=71.5,
        // φ=15.17°, f_r=33.3 Hz:
        //   q = (8.4/71.5)·cos(15.17°) = 0.113389…
        //   a = 8·33.3 = 266.4
        //   BPFO = 266.4·(1−q) = 236.19…   BPFI = 266.4·(1+q) = 296.60…
        //   2·BSF = (71.5/8.4)·33.3·(1−q²) = 279.79…
        let f = compute_fault_frequencies(&za2115(), 33.3).unwrap();
        assert!((f.bpfo - 236.193).abs() < 0.05, "bpfo = {}", f.bpfo);
        assert!((f.bpfi - 296.607).abs() < 0.05, "bpfi = {}", f.bpfi);
        assert!((f.bsf_harmonic() - 279.797).abs() < 0.05);
        // Published nameplate values for this bearing/speed.
        assert!((f.bpfi - 297.0).abs() / 297.0 < 0.01);
        assert!((f.bpfo - 236.0).abs() / 236.0 < 0.01);
        assert!((f.bsf_harmonic() - 278.0).abs() / 278.0 < 0.01);
    }

    #[test]
    fn bpfi_bpfo_identity_is_exact() {
        let f = compute_fault_frequencies(&za2115(), 33.3).unwrap();
        let lhs = f.bpfi + f.bpfo;
        let rhs = 16.0 * 33.3;
        assert!((lhs - rhs).abs() <= 4.0 * f64::EPSILON * rhs.abs());
    }

    #[test]
    fn nameplate_identity_arithmetic() {
        // (297 + 236) / 33.3 = 16.006 — the published values themselves are
        // rounded, so the identity closes to the roller count within 0.1%.
        assert!(((297.0_f64 + 236.0) / 33.3 - 16.0).abs() < 0.016);
    }

    // --- Limits and scaling ---

    #[test]
    fn zero_ratio_limit() {
        // d/D → 0: both ball-pass frequencies converge to n·f_r/2 and the
        // cage turns at half shaft speed.
        let geom = BearingGeometry {
            roller_count: 12,
            roller_diameter_mm: 1e-9,
            pitch_diameter_mm: 100.0,
            contact_angle_deg: 0.0,
        };
        let f = compute_fault_frequencies(&geom, 10.0).unwrap();
        assert!((f.bpfi - 60.0).abs() < 1e-6);
        assert!((f.bpfo - 60.0).abs() < 1e-6);
        assert!((f.ftf - 5.0).abs() < 1e-9);
    }

    #[test]
    fn frequencies_scale_linearly_with_shaft_rate() {
        let f1 = compute_fault_frequencies(&za2115(), 10.0).unwrap();
        let f3 = compute_fault_frequencies(&za2115(), 30.0).unwrap();
        assert!((f3.bpfi - 3.0 * f1.bpfi).abs() < 1e-9);
        assert!((f3.bpfo - 3.0 * f1.bpfo).abs() < 1e-9);
        assert!((f3.bsf - 3.0 * f1.bsf).abs() < 1e-9);
        assert!((f3.ftf - 3.0 * f1.ftf).abs() < 1e-9);
    }

    #[test]
    fn all_outputs_positive() {
        let f = compute_fault_frequencies(&za2115(), 33.3).unwrap();
        assert!(f.bpfi > 0.0 && f.bpfo > 0.0 && f.bsf > 0.0 && f.ftf > 0.0);
        assert!(f.bpfi > f.bpfo);
    }

    // --- Rejection ---

    #[test]
    fn invalid_geometry_rejected() {
        let mut g = za2115();
        g.roller_count = 0;
        assert!(compute_fault_frequencies(&g, 33.3).is_err());

        let mut g = za2115();
        g.pitch_diameter_mm = 5.0; // smaller than roller diameter
        assert!(compute_fault_frequencies(&g, 33.3).is_err());

        let mut g = za2115();
        g.contact_angle_deg = 90.0;
        assert!(compute_fault_frequencies(&g, 33.3).is_err());

        assert!(compute_fault_frequencies(&za2115(), 0.0).is_err());
        assert!(compute_fault_frequencies(&za2115(), -3.0).is_err());
    }
}
