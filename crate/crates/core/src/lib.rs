//! Bearing prognostics toolkit: vibration feature extraction, envelope and
//! wavelet fault detection, degradation-feature selection, and MCMC-based
//! remaining-useful-life estimation, wired together through a run-time
//! plug-in registry with per-phase timing.
//!
//! The pipeline mirrors a tribotronic condition-monitoring loop: measurement
//! records come in, ten diagnostic features per record come out, a
//! steady-state baseline sets the alarm level, and once an alarm fires the
//! best-trending feature drives an exponential degradation model whose
//! posterior yields remaining-useful-life quantiles.
//!
//! ```
//! use tribotron_core::bearing::{compute_fault_frequencies, BearingGeometry};
//!
//! // double-row bearing of the public run-to-failure test rig
//! let geometry = BearingGeometry {
//!     roller_count: 16,
//!     roller_diameter_mm: 8.4,
//!     pitch_diameter_mm: 71.5,
//!     contact_angle_deg: 15.17,
//! };
//! let freqs = compute_fault_frequencies(&geometry, 33.3).unwrap();
//! assert!((freqs.bpfo - 236.2).abs() < 0.1);
//! assert!((freqs.bpfi - 296.6).abs() < 0.1);
//! ```

// `!(x > 0.0)` and friends are used throughout as NaN-rejecting guards:
// the negated comparison is false for NaN where `x <= 0.0` would not be.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asset;
pub mod bearing;
pub mod degrade;
pub mod detect;
pub mod error;
pub mod features;
pub mod framework;
pub mod io;
pub mod plugin;
pub mod rul;
pub mod signal;
pub mod spectrum;
pub mod wavelet;

pub use error::{Error, Result};
