//! Vibration measurement types.
//!
//! A [`VibrationRecord`] is one timestamped, fixed-rate acceleration snapshot
//! from one channel. A run-to-failure experiment produces a time-ordered
//! sequence of such records at a coarse cadence (e.g. one 1-second snapshot
//! every 10 minutes), which downstream code turns into feature series.

use chrono::{DateTime, Utc};

use crate::error::{Error, Result};

/// One timestamped fixed-rate vibration snapshot.
#[derive(Debug, Clone, PartialEq)]
pub struct VibrationRecord {
    /// Acquisition instant (UTC) of the snapshot.
    pub timestamp: DateTime<Utc>,
    /// Sampling rate in Hz; fixed within one run.
    pub sampling_rate_hz: f64,
    /// Acceleration samples in g.
    pub samples: Vec<f64>,
    /// Opaque channel identifier (e.g. `"c0"`; channel-to-bearing mapping is
    /// configuration, not inference).
    pub channel_id: String,
}

impl VibrationRecord {
    /// Construct a record, enforcing nonempty samples and a positive rate.
    pub fn new(
        timestamp: DateTime<Utc>,
        sampling_rate_hz: f64,
        samples: Vec<f64>,
        channel_id: impl Into<String>,
    ) -> Result<Self> {
        if samples.is_empty() {
            return Err(Error::RejectedInput("empty sample vector".into()));
        }
        if !(sampling_rate_hz > 0.0) {
            return Err(Error::RejectedInput(format!(
                "sampling rate must be positive, got {sampling_rate_hz}"
            )));
        }
        Ok(Self {
            timestamp,
            sampling_rate_hz,
            samples,
            channel_id: channel_id.into(),
        })
    }

    /// Snapshot duration in seconds.
    pub fn duration_seconds(&self) -> f64 {
        self.samples.len() as f64 / self.sampling_rate_hz
    }
}

/// A time-ordered sequence of records from one channel of one run.
#[derive(Debug, Clone, Default)]
pub struct MeasurementRun {
    /// Records sorted by timestamp.
    pub records: Vec<VibrationRecord>,
}

impl MeasurementRun {
    /// Build a run from records, verifying timestamp order and uniform
    /// sampling rate / sample count.
    pub fn new(records: Vec<VibrationRecord>) -> Result<Self> {
        if records.is_empty() {
            return Err(Error::RejectedInput("run contains no records".into()));
        }
        let rate = records[0].sampling_rate_hz;
        let count = records[0].samples.len();
        for pair in records.windows(2) {
            if pair[1].timestamp < pair[0].timestamp {
                return Err(Error::RejectedInput(format!(
                    "records out of order: {} follows {}",
                    pair[1].timestamp, pair[0].timestamp
                )));
            }
        }
        for r in &records {
            if r.sampling_rate_hz != rate || r.samples.len() != count {
                return Err(Error::RejectedInput(format!(
                    "record at {} breaks the fixed rate/length contract \
                     ({} Hz × {} samples expected)",
                    r.timestamp, rate, count
                )));
            }
        }
        Ok(Self { records })
    }

    /// Number of records.
    pub fn len(&self) -> usize {
        self.records.len()
    }

    /// True when the run holds no records.
    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Hours elapsed from the first record to each record.
    pub fn hours_since_start(&self) -> Vec<f64> {
        let t0 = self.records[0].timestamp;
        self.records
            .iter()
            .map(|r| (r.timestamp - t0).num_milliseconds() as f64 / 3_600_000.0)
            .collect()
    }
}
