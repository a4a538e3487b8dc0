//! Error taxonomy shared across the pipeline.
//!
//! One enum covers every failure class a caller can hit: rejected inputs,
//! degenerate signals, configuration mistakes, parse failures with file/line
//! context, selection and fitting failures, low-confidence prognoses, and
//! registry misuse. Pipeline phases wrap these with the phase name so a CLI
//! run can report where it died.

use std::path::PathBuf;

/// Every error the toolkit can produce.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Input violates a documented precondition (bad geometry, empty signal, …).
    #[error("rejected input: {0}")]
    RejectedInput(String),

    /// Signal exists but is unusable (e.g. all-zero, so Shape/Impulse are undefined).
    #[error("degenerate signal: {0}")]
    DegenerateSignal(String),

    /// A configuration value is out of range or unsupported.
    #[error("configuration error: {0}")]
    Config(String),

    /// Text input failed to parse.
    #[error("parse error in {path}, line {line}: {message}")]
    Parse {
        /// File the error occurred in.
        path: PathBuf,
        /// 1-based line number.
        line: usize,
        /// What went wrong.
        message: String,
    },

    /// A filename or field could not be decoded as a timestamp.
    #[error("timestamp error: {0}")]
    Timestamp(String),

    /// Structured file did not match the expected schema.
    #[error("schema error: {0}")]
    Schema(String),

    /// Degradation-feature selection had no scorable candidate.
    #[error("selection error: {0}")]
    Selection(String),

    /// Series values outside the fit's domain (log fit needs positive values).
    #[error("fit-domain error: {0}")]
    FitDomain(String),

    /// Too many posterior samples never cross the threshold.
    #[error("low-confidence prognosis: {:.1}% of posterior samples never cross the threshold", .censored_fraction * 100.0)]
    LowConfidence {
        /// Fraction of samples censored (never crossing), in `[0, 1]`.
        censored_fraction: f64,
    },

    /// The sampler could not find a finite-density starting region.
    #[error("sampling error: {0}")]
    Sampling(String),

    /// Duplicate plugin registration for the same (interface, name) pair.
    #[error("registration error: {0}")]
    Registration(String),

    /// Plugin lookup failed; message lists what is registered.
    #[error("lookup error: {0}")]
    Lookup(String),

    /// A pipeline phase failed; carries the phase name for reporting.
    #[error("phase '{phase}' failed: {source}")]
    Phase {
        /// Name of the failed phase (loadData, featureExtraction, …).
        phase: &'static str,
        /// Underlying failure.
        #[source]
        source: Box<Error>,
    },

    /// Underlying I/O failure.
    #[error("I/O error on {path}")]
    Io {
        /// File or directory involved.
        path: PathBuf,
        /// OS-level error.
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Wrap any error with the pipeline phase it occurred in.
    pub fn in_phase(self, phase: &'static str) -> Error {
        Error::Phase {
            phase,
            source: Box::new(self),
        }
    }

    /// Convenience constructor for I/O errors with path context.
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Error {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
