//! Asset records and the meta-parameter configuration surface.
//!
//! An asset bundles a bearing's geometry, its shaft speed, and the seven
//! configuration knobs ([`MetaParameters`]) the pipeline honours. Both load
//! from human-editable TOML; the documented schema lives in
//! `docs/configuration.md`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bearing::BearingGeometry;
use crate::error::{Error, Result};

/// Optional prior for the degradation model, bypassing the least-squares fit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RulModelPrior {
    /// Initial degradation level (must be positive).
    pub c: f64,
    /// Growth rate in 1/hour.
    pub b: f64,
    /// Residual variance on the data scale (must be positive).
    pub sigma2: f64,
}

/// The seven user-facing configuration knobs.
///
/// Their count is the configuration-complexity measure reported by the
/// config audit. Defaults follow the reference experiment: 3× fault alarm,
/// bior6.8 with 12 levels, equal selection weights, degradation alarm 3.5,
/// and 10 000 posterior simulations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MetaParameters {
    /// Fault alarm as a multiplier of the steady-state baseline (mean of
    /// per-record envelope-spectrum maxima).
    pub alarm_level_fault: f64,
    /// Mother wavelet identifier; `"bior6.8"` is the supported family.
    pub mother_wavelet: String,
    /// Number of wavelet decomposition levels (≥ 1; must also satisfy
    /// `levels ≤ floor(log2(sample count))` when applied to a record).
    pub n_decomposition_levels: u32,
    /// Weights (ω1, ω2, ω3) for correlation / monotonicity / robustness in
    /// the selection score; normalized to sum 1 at load time.
    pub deg_param_weights: [f64; 3],
    /// Degradation-feature alarm threshold for RUL estimation, in feature units.
    pub alarm_level_rul: f64,
    /// Optional fixed degradation-model prior; when absent the prior is
    /// derived at run time from least squares.
    pub rul_model_parameters: Option<RulModelPrior>,
    /// Number of MCMC simulations for the posterior (≥ 1; the sampler itself
    /// requires ≥ 1000).
    pub n_simulations: u32,
}

impl Default for MetaParameters {
    fn default() -> Self {
        Self {
            alarm_level_fault: 3.0,
            mother_wavelet: "bior6.8".into(),
            n_decomposition_levels: 12,
            deg_param_weights: [1.0 / 3.0; 3],
            alarm_level_rul: 3.5,
            rul_model_parameters: None,
            n_simulations: 10_000,
        }
    }
}

impl MetaParameters {
    /// Number of meta-parameters — the configuration-complexity measure.
    pub const COUNT: usize = 7;

    /// Validate ranges and normalize the weight triple to sum 1.
    pub fn normalize(mut self) -> Result<Self> {
        if !(self.alarm_level_fault > 0.0) {
            return Err(Error::Config(format!(
                "alarm_level_fault must be positive, got {}",
                self.alarm_level_fault
            )));
        }
        if self.n_decomposition_levels < 1 {
            return Err(Error::Config("n_decomposition_levels must be ≥ 1".into()));
        }
        if self.deg_param_weights.iter().any(|w| *w < 0.0) {
            return Err(Error::Config(format!(
                "deg_param_weights must be nonnegative, got {:?}",
                self.deg_param_weights
            )));
        }
        let sum: f64 = self.deg_param_weights.iter().sum();
        if !(sum > 0.0) {
            return Err(Error::Config(
                "deg_param_weights must not all be zero".into(),
            ));
        }
        for w in &mut self.deg_param_weights {
            *w /= sum;
        }
        if !(self.alarm_level_rul > 0.0) {
            return Err(Error::Config(format!(
                "alarm_level_rul must be positive, got {}",
                self.alarm_level_rul
            )));
        }
        if let Some(p) = &self.rul_model_parameters {
            if !(p.c > 0.0) || !(p.sigma2 > 0.0) {
                return Err(Error::Config(
                    "rul_model_parameters requires c > 0 and sigma2 > 0".into(),
                ));
            }
        }
        if self.n_simulations < 1 {
            return Err(Error::Config("n_simulations must be ≥ 1".into()));
        }
        Ok(self)
    }

    /// Load meta-parameters from a TOML file with a top-level `[meta]` table,
    /// applying defaults for missing keys and normalizing weights.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let file: MetaFile = toml::from_str(&text)
            .map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
        file.meta.normalize()
    }
}

#[derive(Deserialize)]
struct MetaFile {
    #[serde(default)]
    meta: MetaParameters,
}

/// One monitored asset: identity, geometry, shaft speed, and configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssetRecord {
    /// Asset identifier (free-form).
    pub asset_id: String,
    /// Bearing geometry of the monitored row.
    pub geometry: BearingGeometry,
    /// Shaft rotation rate in Hz.
    pub shaft_rate_hz: f64,
    /// Configuration knobs for this asset.
    pub meta: MetaParameters,
}

impl AssetRecord {
    /// Validate geometry, shaft rate, and meta-parameters; normalizes weights.
    pub fn normalize(mut self) -> Result<Self> {
        self.geometry.validate()?;
        if !(self.shaft_rate_hz > 0.0) {
            return Err(Error::RejectedInput(format!(
                "shaft rate must be positive, got {}",
                self.shaft_rate_hz
            )));
        }
        self.meta = self.meta.normalize()?;
        Ok(self)
    }

    /// Load an asset from TOML: an `[asset]` table with nested `[asset.geometry]`
    /// and an optional `[meta]` table (defaults fill the gaps).
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let file: AssetFile = toml::from_str(&text)
            .map_err(|e| Error::Schema(format!("{}: {e}", path.display())))?;
        AssetRecord {
            asset_id: file.asset.asset_id,
            geometry: file.asset.geometry,
            shaft_rate_hz: file.asset.shaft_rate_hz,
            meta: file.meta,
        }
        .normalize()
    }
}

#[derive(Deserialize)]
struct AssetFile {
    asset: AssetTable,
    #[serde(default)]
    meta: MetaParameters,
}

#[derive(Deserialize)]
struct AssetTable {
    asset_id: String,
    geometry: BearingGeometry,
    shaft_rate_hz: f64,
}
