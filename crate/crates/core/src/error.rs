//! Crate-wide error type.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the analysis chain.
///
/// Variants carry enough context (file, line, offending value) to produce
/// actionable messages without re-parsing anything.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    // -- trace construction --
    #[error("channel lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("negative photon count {value} at bin {bin}")]
    NegativeCount { bin: usize, value: f64 },
    #[error("trace has no bins")]
    EmptyTrace,
    #[error("bin width must be > 0, got {0}")]
    NonPositiveBinWidth(f64),
    #[error("burst indices must be strictly increasing (index {index} repeated or out of order)")]
    UnorderedBursts { index: usize },

    // -- correction / selection parameters --
    #[error("{name} must be >= 0, got {value}")]
    NegativeParameter { name: &'static str, value: f64 },
    #[error("{name} must lie in [0, 1), got {value}")]
    FractionOutOfRange { name: &'static str, value: f64 },
    #[error("gamma must be > 0, got {0}")]
    NonPositiveGamma(f64),

    // -- analysis --
    #[error("total photon count is zero, efficiency undefined")]
    ZeroTotal,
    #[error("{name} must be > 0, got {value}")]
    NonPositiveDistance { name: &'static str, value: f64 },
    #[error("bad binning: {reason}")]
    BadBinning { reason: String },
    #[error("degenerate histogram: {reason}")]
    DegenerateData { reason: String },
    #[error("no data points supplied")]
    EmptyInput,
    #[error("point {index} has E = {value}, outside the open interval (0, 1)")]
    OutOfDomainPoint { index: usize, value: f64 },

    // -- io --
    #[error("file not found: {0}")]
    FileNotFound(PathBuf),
    #[error("cannot read {path}: {source}")]
    ReadFailed {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{file}:{line}: malformed row: {reason}")]
    MalformedRow {
        file: PathBuf,
        line: usize,
        reason: String,
    },
    #[error("{file}:{line}: {found} columns but mode {mode} expects {expected}")]
    MixedMode {
        file: PathBuf,
        line: usize,
        found: usize,
        expected: usize,
        mode: &'static str,
    },
    #[error("{file}:{line}: unknown config key `{key}`")]
    UnknownKey {
        file: PathBuf,
        line: usize,
        key: String,
    },
    #[error("missing required config key `{key}` in {file}")]
    MissingRequiredKey { file: PathBuf, key: &'static str },
    #[error("{file}:{line}: {key} = {value}: {reason}")]
    ValueOutOfDomain {
        file: PathBuf,
        line: usize,
        key: String,
        value: String,
        reason: String,
    },
    #[error("cannot write {path}: {source}")]
    WriteFailed {
        path: PathBuf,
        source: std::io::Error,
    },

    // -- simulation --
    #[error("invalid simulation parameter {name}: {reason}")]
    InvalidSimParam { name: &'static str, reason: String },
}
