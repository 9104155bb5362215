//! Error type shared by all modules.

use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, CoreError>;

#[derive(Debug, Clone, PartialEq)]
pub enum CoreError {
    /// Bad configuration: unknown layer, shape/dimension mismatch, invalid
    /// flag combination.
    Config(String),
    /// A non-finite value appeared mid-computation; the message names the
    /// layer or draw index where it was first seen.
    Numeric(String),
    /// Percentile normalization hit a flat pooled sample (P(p2) == P(p1)).
    DegenerateStats(String),
    /// The feature is insensitive to this image: the reg-distance bounds at
    /// extreme lambda collapse (d_max <= d_min).
    DegenerateFeature(String),
    /// Not enough data for the requested statistic.
    InsufficientData(String),
    /// Reference-model training finished below the accuracy floor.
    Training { achieved: f64, floor: f64 },
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::Config(m) => write!(f, "configuration error: {m}"),
            CoreError::Numeric(m) => write!(f, "numeric error: {m}"),
            CoreError::DegenerateStats(m) => write!(f, "degenerate stats: {m}"),
            CoreError::DegenerateFeature(m) => write!(f, "degenerate feature: {m}"),
            CoreError::InsufficientData(m) => write!(f, "insufficient data: {m}"),
            CoreError::Training { achieved, floor } => write!(
                f,
                "training error: test accuracy {achieved:.4} below floor {floor:.4}"
            ),
        }
    }
}

impl core::error::Error for CoreError {}

impl CoreError {
    pub fn config(msg: impl Into<String>) -> Self {
        CoreError::Config(msg.into())
    }

    pub fn numeric(msg: impl Into<String>) -> Self {
        CoreError::Numeric(msg.into())
    }
}
