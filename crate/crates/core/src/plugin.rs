//! Named plug-in interfaces and the run-time registry that binds them.
//!
//! The pipeline is split into five swappable roles — measurement loading,
//! asset data, feature extraction, fault detection, and RUL estimation —
//! each a trait behind a factory registered under a plug-in name. The
//! registry takes registrations at any time, including while analyses are
//! running on other threads.
//!
//! ```
//! use tribotron_core::plugin::{InterfaceId, PluginRegistry};
//!
//! let registry = PluginRegistry::with_builtins();
//! let detector = registry.resolve_fault_detector("bearing").unwrap();
//! assert!(registry.registered_names(InterfaceId::FaultDetector).contains(&"bearing".to_string()));
//! drop(detector);
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::path::{Path, PathBuf};
use std::sync::RwLock;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::asset::{AssetRecord, MetaParameters};
use crate::bearing::FaultFrequencies;
use crate::degrade::FeatureSeries;
use crate::detect::{
    alarm_level_from_rows, detect_from_row, first_detection, DEFAULT_BASELINE_COUNT,
};
use crate::error::{Error, Result};
use crate::features::{extract_row, FeatureRow};
use crate::io::{load_channel_run, scan_run_directory};
use crate::rul::{estimate_rul, RulResult};
use crate::signal::MeasurementRun;

/// Name the built-in implementations are registered under.
pub const BUILTIN_PLUGIN_NAME: &str = "bearing";

// --- interfaces -----------------------------------------------------------

/// The five pipeline roles a plug-in can provide.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum InterfaceId {
    /// Supplies the measurement run to analyze.
    MeasurementData,
    /// Supplies asset records (geometry, shaft rate, configuration).
    AssetData,
    /// Turns measurement records into feature rows.
    FeatureExtractor,
    /// Decides fault status from feature rows.
    FaultDetector,
    /// Estimates remaining useful life from a degradation series.
    RulAlgorithm,
}

impl InterfaceId {
    /// All interfaces, in pipeline order.
    pub const ALL: [InterfaceId; 5] = [
        InterfaceId::MeasurementData,
        InterfaceId::AssetData,
        InterfaceId::FeatureExtractor,
        InterfaceId::FaultDetector,
        InterfaceId::RulAlgorithm,
    ];
}

impl std::fmt::Display for InterfaceId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            InterfaceId::MeasurementData => "MeasurementData",
            InterfaceId::AssetData => "AssetData",
            InterfaceId::FeatureExtractor => "FeatureExtractor",
            InterfaceId::FaultDetector => "FaultDetector",
            InterfaceId::RulAlgorithm => "RulAlgorithm",
        };
        f.write_str(name)
    }
}

/// Supplies the measurement run to analyze.
pub trait MeasurementData {
    /// Load and return the run, at least one record.
    fn measurement_run(&self) -> Result<MeasurementRun>;
}

/// Supplies asset records; the id's meaning is implementation-defined (the
/// built-in treats it as a path to an asset configuration file).
pub trait AssetData {
    /// Load the asset record for an id.
    fn asset_record(&self, asset_id: &str) -> Result<AssetRecord>;
}

/// Turns measurement records into feature rows.
pub trait FeatureExtractor {
    /// Extract one row per record, in run order.
    fn extract_features(
        &self,
        run: &MeasurementRun,
        freqs: &FaultFrequencies,
        meta: &MetaParameters,
    ) -> Result<Vec<FeatureRow>>;
}

/// Decides fault status from feature rows.
pub trait FaultDetector {
    /// Judge the run represented by `rows` (time-ordered).
    fn detect(&self, rows: &[FeatureRow], meta: &MetaParameters) -> Result<crate::detect::FaultStatus>;
}

/// Estimates remaining useful life from a degradation-feature series.
pub trait RulAlgorithm {
    /// Estimate RUL; `last_measurement` anchors the series' last point in
    /// calendar time and `seed` fixes the stochastic part.
    fn estimate(
        &self,
        series: &FeatureSeries,
        meta: &MetaParameters,
        last_measurement: DateTime<Utc>,
        seed: u64,
    ) -> Result<RulResult>;
}

// --- factories ------------------------------------------------------------

type MeasurementFactory = Box<dyn Fn() -> Box<dyn MeasurementData> + Send + Sync>;
type AssetFactory = Box<dyn Fn() -> Box<dyn AssetData> + Send + Sync>;
type ExtractorFactory = Box<dyn Fn() -> Box<dyn FeatureExtractor> + Send + Sync>;
type DetectorFactory = Box<dyn Fn() -> Box<dyn FaultDetector> + Send + Sync>;
type RulFactory = Box<dyn Fn() -> Box<dyn RulAlgorithm> + Send + Sync>;

/// A factory for one interface implementation; the variant fixes which
/// interface the registration is for, so mismatched registrations cannot be
/// expressed.
pub enum PluginFactory {
    /// Produces measurement sources.
    MeasurementData(MeasurementFactory),
    /// Produces asset-data providers.
    AssetData(AssetFactory),
    /// Produces feature extractors.
    FeatureExtractor(ExtractorFactory),
    /// Produces fault detectors.
    FaultDetector(DetectorFactory),
    /// Produces RUL algorithms.
    RulAlgorithm(RulFactory),
}

impl PluginFactory {
    /// Interface this factory serves.
    pub fn interface_id(&self) -> InterfaceId {
        match self {
            PluginFactory::MeasurementData(_) => InterfaceId::MeasurementData,
            PluginFactory::AssetData(_) => InterfaceId::AssetData,
            PluginFactory::FeatureExtractor(_) => InterfaceId::FeatureExtractor,
            PluginFactory::FaultDetector(_) => InterfaceId::FaultDetector,
            PluginFactory::RulAlgorithm(_) => InterfaceId::RulAlgorithm,
        }
    }

    /// Wrap a plain constructor as a measurement-data factory.
    pub fn measurement_data<T, F>(make: F) -> Self
    where
        T: MeasurementData + 'static,
        F: Fn() -> T + Send + Sync + 'static,
    {
        PluginFactory::MeasurementData(Box::new(move || Box::new(make())))
    }

    /// Wrap a plain constructor as an asset-data factory.
    pub fn asset_data<T, F>(make: F) -> Self
    where
        T: AssetData + 'static,
        F: Fn() -> T + Send + Sync + 'static,
    {
        PluginFactory::AssetData(Box::new(move || Box::new(make())))
    }

    /// Wrap a plain constructor as a feature-extractor factory.
    pub fn feature_extractor<T, F>(make: F) -> Self
    where
        T: FeatureExtractor + 'static,
        F: Fn() -> T + Send + Sync + 'static,
    {
        PluginFactory::FeatureExtractor(Box::new(move || Box::new(make())))
    }

    /// Wrap a plain constructor as a fault-detector factory.
    pub fn fault_detector<T, F>(make: F) -> Self
    where
        T: FaultDetector + 'static,
        F: Fn() -> T + Send + Sync + 'static,
    {
        PluginFactory::FaultDetector(Box::new(move || Box::new(make())))
    }

    /// Wrap a plain constructor as a RUL-algorithm factory.
    pub fn rul_algorithm<T, F>(make: F) -> Self
    where
        T: RulAlgorithm + 'static,
        F: Fn() -> T + Send + Sync + 'static,
    {
        PluginFactory::RulAlgorithm(Box::new(move || Box::new(make())))
    }
}

/// What one named plug-in provides.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PluginDescriptor {
    /// Registered plug-in name.
    pub plugin_name: String,
    /// Interfaces the plug-in implements.
    pub provides: BTreeSet<InterfaceId>,
    /// Declared version, `0.0.0` when none was declared.
    pub version: String,
}

// --- registry -------------------------------------------------------------

#[derive(Default)]
struct RegistryInner {
    factories: BTreeMap<(InterfaceId, String), PluginFactory>,
    active: BTreeMap<InterfaceId, String>,
    versions: BTreeMap<String, String>,
}

/// Thread-safe name → factory registry for all five interfaces.
///
/// Reads (resolution) take a shared lock and writes (registration) an
/// exclusive one, so implementations can be added while analyses run.
/// The first implementation registered for an interface becomes its active
/// one; [`PluginRegistry::set_active`] swaps later.
#[derive(Default)]
pub struct PluginRegistry {
    inner: RwLock<RegistryInner>,
}

impl PluginRegistry {
    /// An empty registry.
    pub fn new() -> Self {
        PluginRegistry::default()
    }

    /// A registry preloaded with the built-in bearing implementations of
    /// every interface except [`InterfaceId::MeasurementData`], which is
    /// inherently source-specific — register one with
    /// [`PluginRegistry::register_measurement_directory`] or a custom
    /// factory.
    pub fn with_builtins() -> Self {
        let registry = PluginRegistry::new();
        registry
            .register_implementation(
                BUILTIN_PLUGIN_NAME,
                PluginFactory::asset_data(BearingAssetData::default),
            )
            .expect("empty registry accepts the built-ins");
        registry
            .register_implementation(
                BUILTIN_PLUGIN_NAME,
                PluginFactory::feature_extractor(BearingFeatureExtractor::default),
            )
            .expect("empty registry accepts the built-ins");
        registry
            .register_implementation(
                BUILTIN_PLUGIN_NAME,
                PluginFactory::fault_detector(BearingFaultDetector::default),
            )
            .expect("empty registry accepts the built-ins");
        registry
            .register_implementation(
                BUILTIN_PLUGIN_NAME,
                PluginFactory::rul_algorithm(BearingRulAlgorithm::default),
            )
            .expect("empty registry accepts the built-ins");
        registry.set_plugin_version(BUILTIN_PLUGIN_NAME, env!("CARGO_PKG_VERSION"));
        registry
    }

    /// Bind a factory under a plug-in name; the interface comes from the
    /// factory itself. Binding the same (interface, name) pair twice is a
    /// registration error. The first binding for an interface becomes the
    /// active implementation.
    pub fn register_implementation(&self, plugin_name: &str, factory: PluginFactory) -> Result<()> {
        let interface = factory.interface_id();
        let mut inner = self.inner.write().expect("registry lock poisoned");
        let key = (interface, plugin_name.to_string());
        if inner.factories.contains_key(&key) {
            return Err(Error::Registration(format!(
                "{plugin_name:?} is already bound for interface {interface}"
            )));
        }
        inner.factories.insert(key, factory);
        inner
            .active
            .entry(interface)
            .or_insert_with(|| plugin_name.to_string());
        Ok(())
    }

    /// Register a directory-backed measurement source reading one channel
    /// of an archive-layout run directory.
    pub fn register_measurement_directory(
        &self,
        plugin_name: &str,
        directory: &Path,
        channel: usize,
    ) -> Result<()> {
        let directory = directory.to_path_buf();
        self.register_implementation(
            plugin_name,
            PluginFactory::measurement_data(move || DirectoryMeasurementSource {
                directory: directory.clone(),
                channel,
            }),
        )
    }

    /// Declare a plug-in's version for [`PluginRegistry::descriptors`].
    pub fn set_plugin_version(&self, plugin_name: &str, version: &str) {
        let mut inner = self.inner.write().expect("registry lock poisoned");
        inner
            .versions
            .insert(plugin_name.to_string(), version.to_string());
    }

    /// Make a registered implementation the active one for its interface.
    pub fn set_active(&self, interface: InterfaceId, plugin_name: &str) -> Result<()> {
        let mut inner = self.inner.write().expect("registry lock poisoned");
        let key = (interface, plugin_name.to_string());
        if !inner.factories.contains_key(&key) {
            return Err(self.lookup_error(&inner, interface, plugin_name));
        }
        inner.active.insert(interface, plugin_name.to_string());
        Ok(())
    }

    /// Names registered for an interface, sorted.
    pub fn registered_names(&self, interface: InterfaceId) -> Vec<String> {
        let inner = self.inner.read().expect("registry lock poisoned");
        inner
            .factories
            .keys()
            .filter(|(i, _)| *i == interface)
            .map(|(_, name)| name.clone())
            .collect()
    }

    /// Active plug-in name for an interface, if any is registered.
    pub fn active_name(&self, interface: InterfaceId) -> Option<String> {
        let inner = self.inner.read().expect("registry lock poisoned");
        inner.active.get(&interface).cloned()
    }

    /// True when every interface has at least one implementation.
    pub fn is_complete(&self) -> bool {
        let inner = self.inner.read().expect("registry lock poisoned");
        InterfaceId::ALL
            .iter()
            .all(|i| inner.factories.keys().any(|(k, _)| k == i))
    }

    /// One descriptor per registered plug-in name.
    pub fn descriptors(&self) -> Vec<PluginDescriptor> {
        let inner = self.inner.read().expect("registry lock poisoned");
        let mut provides: BTreeMap<String, BTreeSet<InterfaceId>> = BTreeMap::new();
        for (interface, name) in inner.factories.keys() {
            provides.entry(name.clone()).or_default().insert(*interface);
        }
        provides
            .into_iter()
            .map(|(plugin_name, provides)| PluginDescriptor {
                version: inner
                    .versions
                    .get(&plugin_name)
                    .cloned()
                    .unwrap_or_else(|| "0.0.0".to_string()),
                plugin_name,
                provides,
            })
            .collect()
    }

    fn lookup_error(
        &self,
        inner: &RegistryInner,
        interface: InterfaceId,
        plugin_name: &str,
    ) -> Error {
        let names: Vec<String> = inner
            .factories
            .keys()
            .filter(|(i, _)| *i == interface)
            .map(|(_, n)| format!("{n:?}"))
            .collect();
        if names.is_empty() {
            Error::Lookup(format!(
                "no implementation registered for interface {interface}"
            ))
        } else {
            Error::Lookup(format!(
                "{plugin_name:?} is not registered for interface {interface}; registered: {}",
                names.join(", ")
            ))
        }
    }

    /// Resolve a measurement source by plug-in name.
    pub fn resolve_measurement_data(&self, plugin_name: &str) -> Result<Box<dyn MeasurementData>> {
        let inner = self.inner.read().expect("registry lock poisoned");
        match inner
            .factories
            .get(&(InterfaceId::MeasurementData, plugin_name.to_string()))
        {
            Some(PluginFactory::MeasurementData(make)) => Ok(make()),
            _ => Err(self.lookup_error(&inner, InterfaceId::MeasurementData, plugin_name)),
        }
    }

    /// Resolve an asset-data provider by plug-in name.
    pub fn resolve_asset_data(&self, plugin_name: &str) -> Result<Box<dyn AssetData>> {
        let inner = self.inner.read().expect("registry lock poisoned");
        match inner
            .factories
            .get(&(InterfaceId::AssetData, plugin_name.to_string()))
        {
            Some(PluginFactory::AssetData(make)) => Ok(make()),
            _ => Err(self.lookup_error(&inner, InterfaceId::AssetData, plugin_name)),
        }
    }

    /// Resolve a feature extractor by plug-in name.
    pub fn resolve_feature_extractor(&self, plugin_name: &str) -> Result<Box<dyn FeatureExtractor>> {
        let inner = self.inner.read().expect("registry lock poisoned");
        match inner
            .factories
            .get(&(InterfaceId::FeatureExtractor, plugin_name.to_string()))
        {
            Some(PluginFactory::FeatureExtractor(make)) => Ok(make()),
            _ => Err(self.lookup_error(&inner, InterfaceId::FeatureExtractor, plugin_name)),
        }
    }

    /// Resolve a fault detector by plug-in name.
    pub fn resolve_fault_detector(&self, plugin_name: &str) -> Result<Box<dyn FaultDetector>> {
        let inner = self.inner.read().expect("registry lock poisoned");
        match inner
            .factories
            .get(&(InterfaceId::FaultDetector, plugin_name.to_string()))
        {
            Some(PluginFactory::FaultDetector(make)) => Ok(make()),
            _ => Err(self.lookup_error(&inner, InterfaceId::FaultDetector, plugin_name)),
        }
    }

    /// Resolve a RUL algorithm by plug-in name.
    pub fn resolve_rul_algorithm(&self, plugin_name: &str) -> Result<Box<dyn RulAlgorithm>> {
        let inner = self.inner.read().expect("registry lock poisoned");
        match inner
            .factories
            .get(&(InterfaceId::RulAlgorithm, plugin_name.to_string()))
        {
            Some(PluginFactory::RulAlgorithm(make)) => Ok(make()),
            _ => Err(self.lookup_error(&inner, InterfaceId::RulAlgorithm, plugin_name)),
        }
    }

    fn active_or_lookup(&self, interface: InterfaceId) -> Result<String> {
        self.active_name(interface).ok_or_else(|| {
            let inner = self.inner.read().expect("registry lock poisoned");
            self.lookup_error(&inner, interface, "<active>")
        })
    }

    /// The active asset-data provider.
    pub fn active_asset_data(&self) -> Result<Box<dyn AssetData>> {
        self.resolve_asset_data(&self.active_or_lookup(InterfaceId::AssetData)?)
    }

    /// The active feature extractor.
    pub fn active_feature_extractor(&self) -> Result<Box<dyn FeatureExtractor>> {
        self.resolve_feature_extractor(&self.active_or_lookup(InterfaceId::FeatureExtractor)?)
    }

    /// The active fault detector.
    pub fn active_fault_detector(&self) -> Result<Box<dyn FaultDetector>> {
        self.resolve_fault_detector(&self.active_or_lookup(InterfaceId::FaultDetector)?)
    }

    /// The active RUL algorithm.
    pub fn active_rul_algorithm(&self) -> Result<Box<dyn RulAlgorithm>> {
        self.resolve_rul_algorithm(&self.active_or_lookup(InterfaceId::RulAlgorithm)?)
    }
}

// --- built-in implementations ---------------------------------------------

/// Measurement source reading one channel of an archive-layout directory.
#[derive(Debug, Clone)]
pub struct DirectoryMeasurementSource {
    /// Run directory to scan.
    pub directory: PathBuf,
    /// Zero-based channel (column) to extract.
    pub channel: usize,
}

impl MeasurementData for DirectoryMeasurementSource {
    fn measurement_run(&self) -> Result<MeasurementRun> {
        let scanned = scan_run_directory(&self.directory)?;
        load_channel_run(&scanned, self.channel)
    }
}

/// Built-in asset provider: the asset id is a path to an asset
/// configuration file.
#[derive(Debug, Clone, Copy, Default)]
pub struct BearingAssetData;

impl AssetData for BearingAssetData {
    fn asset_record(&self, asset_id: &str) -> Result<AssetRecord> {
        AssetRecord::load(Path::new(asset_id))
    }
}

/// Built-in extractor: one full feature row per record.
#[derive(Debug, Clone, Copy, Default)]
pub struct BearingFeatureExtractor;

impl FeatureExtractor for BearingFeatureExtractor {
    fn extract_features(
        &self,
        run: &MeasurementRun,
        freqs: &FaultFrequencies,
        meta: &MetaParameters,
    ) -> Result<Vec<FeatureRow>> {
        run.records
            .iter()
            .map(|record| extract_row(record, freqs, meta))
            .collect()
    }
}

/// Built-in detector: alarm level from the leading steady-state rows, then
/// the first row exceeding it decides the verdict. A run with no exceedance
/// reports the last row's (healthy) status.
#[derive(Debug, Clone, Copy)]
pub struct BearingFaultDetector {
    /// Leading rows treated as the steady-state baseline.
    pub baseline_count: usize,
}

impl Default for BearingFaultDetector {
    fn default() -> Self {
        BearingFaultDetector {
            baseline_count: DEFAULT_BASELINE_COUNT,
        }
    }
}

impl FaultDetector for BearingFaultDetector {
    fn detect(&self, rows: &[FeatureRow], meta: &MetaParameters) -> Result<crate::detect::FaultStatus> {
        if rows.is_empty() {
            return Err(Error::RejectedInput(
                "fault detection needs at least one feature row".into(),
            ));
        }
        let baseline = &rows[..self.baseline_count.min(rows.len())];
        let alarm = alarm_level_from_rows(baseline, meta.alarm_level_fault)?;
        let row = match first_detection(rows, alarm) {
            Some(index) => &rows[index],
            None => rows.last().unwrap(),
        };
        Ok(detect_from_row(row, alarm))
    }
}

/// Built-in RUL algorithm: exponential model with an adaptive Metropolis
/// posterior.
#[derive(Debug, Clone, Copy, Default)]
pub struct BearingRulAlgorithm;

impl RulAlgorithm for BearingRulAlgorithm {
    fn estimate(
        &self,
        series: &FeatureSeries,
        meta: &MetaParameters,
        last_measurement: DateTime<Utc>,
        seed: u64,
    ) -> Result<RulResult> {
        estimate_rul(series, meta, last_measurement, seed)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::TimeZone;

    fn row(minute: u32, raw: [f64; 3], ses_max: f64) -> FeatureRow {
        FeatureRow {
            timestamp: Utc.with_ymd_and_hms(2004, 2, 12, 10, minute, 0).unwrap(),
            base: [0.0; 8],
            raw_envelope_amp: raw,
            wavelet_envelope_amp: [0.0; 3],
            envelope_spectrum_max: ses_max,
        }
    }

    fn meta() -> MetaParameters {
        MetaParameters::default().normalize().unwrap()
    }

    // --- registration and resolution ---

    #[test]
    fn builtin_detector_resolves_and_detects() {
        let registry = PluginRegistry::with_builtins();
        let detector = registry.resolve_fault_detector("bearing").unwrap();
        let mut rows: Vec<FeatureRow> =
            (0..9).map(|m| row(m, [0.1, 0.1, 0.1], 0.2)).collect();
        rows.push(row(45, [2.0, 0.1, 0.1], 2.0));
        let status = detector.detect(&rows, &meta()).unwrap();
        assert!(status.is_faulty);
        assert_eq!(status.fault_type, crate::detect::FaultType::Bpfi);
        assert_eq!(status.detection_time, rows[9].timestamp);
    }

    #[test]
    fn duplicate_binding_is_a_registration_error() {
        let registry = PluginRegistry::with_builtins();
        let result = registry.register_implementation(
            "bearing",
            PluginFactory::fault_detector(BearingFaultDetector::default),
        );
        assert!(matches!(result, Err(Error::Registration(_))));
    }

    #[test]
    fn unknown_name_lists_the_registered_ones() {
        let registry = PluginRegistry::with_builtins();
        match registry.resolve_fault_detector("gearbox") {
            Err(Error::Lookup(message)) => {
                assert!(message.contains("gearbox"), "message: {message}");
                assert!(message.contains("bearing"), "message: {message}");
            }
            other => panic!("expected a lookup error, got {:?}", other.err()),
        }
    }

    #[test]
    fn resolution_is_referentially_transparent() {
        let registry = PluginRegistry::with_builtins();
        let rows = vec![row(0, [0.3, 0.2, 0.1], 0.3), row(10, [0.3, 0.2, 0.1], 0.3)];
        let first = registry.resolve_fault_detector("bearing").unwrap();
        let second = registry.resolve_fault_detector("bearing").unwrap();
        assert_eq!(
            first.detect(&rows, &meta()).unwrap(),
            second.detect(&rows, &meta()).unwrap()
        );
    }

    #[test]
    fn set_active_swaps_the_implementation() {
        struct AlwaysHealthy;
        impl FaultDetector for AlwaysHealthy {
            fn detect(
                &self,
                rows: &[FeatureRow],
                _meta: &MetaParameters,
            ) -> Result<crate::detect::FaultStatus> {
                Ok(crate::detect::FaultStatus {
                    is_faulty: false,
                    fault_type: crate::detect::FaultType::None,
                    detected_amplitude: 0.0,
                    alarm_level: f64::INFINITY,
                    detection_time: rows[0].timestamp,
                })
            }
        }
        let registry = PluginRegistry::with_builtins();
        registry
            .register_implementation("quiet", PluginFactory::fault_detector(|| AlwaysHealthy))
            .unwrap();
        // the first registration stays active until told otherwise
        assert_eq!(
            registry.active_name(InterfaceId::FaultDetector).unwrap(),
            "bearing"
        );
        let mut rows: Vec<FeatureRow> =
            (0..6).map(|m| row(m, [0.1, 0.1, 0.1], 0.1)).collect();
        rows.push(row(30, [9.0, 0.1, 0.1], 9.0));
        let before = registry.active_fault_detector().unwrap();
        assert!(before.detect(&rows, &meta()).unwrap().is_faulty);
        registry
            .set_active(InterfaceId::FaultDetector, "quiet")
            .unwrap();
        let after = registry.active_fault_detector().unwrap();
        assert!(!after.detect(&rows, &meta()).unwrap().is_faulty);
        assert!(matches!(
            registry.set_active(InterfaceId::FaultDetector, "missing"),
            Err(Error::Lookup(_))
        ));
    }

    #[test]
    fn registration_works_while_another_thread_resolves() {
        let registry = std::sync::Arc::new(PluginRegistry::with_builtins());
        let writer = {
            let registry = registry.clone();
            std::thread::spawn(move || {
                for i in 0..50 {
                    registry
                        .register_implementation(
                            &format!("extra-{i}"),
                            PluginFactory::rul_algorithm(BearingRulAlgorithm::default),
                        )
                        .unwrap();
                }
            })
        };
        for _ in 0..200 {
            registry.resolve_fault_detector("bearing").unwrap();
        }
        writer.join().unwrap();
        assert_eq!(registry.registered_names(InterfaceId::RulAlgorithm).len(), 51);
    }

    // --- descriptors and completeness ---

    #[test]
    fn descriptors_report_provides_and_version() {
        let registry = PluginRegistry::with_builtins();
        assert!(!registry.is_complete()); // no measurement source yet
        let dir = tempfile::tempdir().unwrap();
        registry
            .register_measurement_directory("bearing", dir.path(), 0)
            .unwrap();
        assert!(registry.is_complete());
        let descriptors = registry.descriptors();
        assert_eq!(descriptors.len(), 1);
        let d = &descriptors[0];
        assert_eq!(d.plugin_name, "bearing");
        assert_eq!(d.provides.len(), 5);
        assert_eq!(d.version, env!("CARGO_PKG_VERSION"));
    }

    #[test]
    fn directory_source_loads_the_requested_channel() {
        let dir = tempfile::tempdir().unwrap();
        for (name, scale) in [("2004.02.12.10.00.00", 1.0), ("2004.02.12.10.10.00", 2.0)] {
            let mut out = String::with_capacity(crate::io::IMS_SAMPLES_PER_FILE * 16);
            for i in 0..crate::io::IMS_SAMPLES_PER_FILE {
                let v = scale * (i as f64 * 0.01).sin() * 0.1;
                out.push_str(&format!("{v:.6}\t{:.6}\n", -v));
            }
            std::fs::write(dir.path().join(name), out).unwrap();
        }
        let registry = PluginRegistry::with_builtins();
        registry
            .register_measurement_directory("bearing", dir.path(), 1)
            .unwrap();
        let source = registry.resolve_measurement_data("bearing").unwrap();
        let run = source.measurement_run().unwrap();
        assert_eq!(run.len(), 2);
        assert!(run.records[0].samples[10] < 0.0);
    }
}
