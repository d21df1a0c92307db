//! Statistical features of wavelet detail bands.
//!
//! Each of the 11 detail levels contributes six statistics, in this
//! order: energy (EDR), standard deviation (STD), mean (MEAN), kurtosis
//! (KRT), skewness (SKW) and a log-energy entropy (ENTP). Stacked
//! level-major they form the 66-value feature vector consumed by the
//! classifier: feature `6*(i-1)+j` is statistic `j` of level `i`.
//!
//! Definitions over a coefficient sequence `c` of length `N` with mean
//! `mu`:
//!
//! * `EDR  = sum(c^2)`
//! * `STD  = sqrt(sum((c-mu)^2) / (N-1))`
//! * `MEAN = sum(c) / N`
//! * `KRT  = mean((c-mu)^4) / STD^4`
//! * `SKW  = mean((c-mu)^3) / STD^3`
//! * `ENTP = -sum(c^2 * ln(c^2))`, with `0 * ln 0 = 0`
//!
//! The central moments use the `1/N` expectation while STD uses `1/(N-1)`,
//! exactly as the formulas are usually written; a zero-variance sequence
//! gets KRT = SKW = 0 by convention instead of a division by zero.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dwt::WaveletDecomposition;
use crate::siggen::EventClass;

/// Detail levels expected by the 66-feature contract.
pub const N_LEVELS: usize = 11;
/// Statistics per level.
pub const STATS_PER_LEVEL: usize = 6;
/// Total feature count.
pub const N_FEATURES: usize = N_LEVELS * STATS_PER_LEVEL;
/// Statistic names in feature order.
pub const STAT_NAMES: [&str; STATS_PER_LEVEL] = ["EDR", "STD", "MEAN", "KRT", "SKW", "ENTP"];

/// Errors raised by feature extraction.
#[derive(Debug, Error)]
pub enum FeatureError {
    /// Statistics need at least two coefficients.
    #[error("degenerate sequence of length {len}: statistics need at least 2 values")]
    DegenerateSequence { len: usize },
    /// The decomposition does not have the expected number of levels.
    #[error("wrong level count: got {got}, the feature vector needs {N_LEVELS}")]
    WrongLevelCount { got: usize },
}

/// The six statistics of one detail level, in feature order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevelStats {
    pub energy: f64,
    pub std_dev: f64,
    pub mean: f64,
    pub kurtosis: f64,
    pub skewness: f64,
    pub entropy: f64,
}

impl LevelStats {
    /// The values in feature order: EDR, STD, MEAN, KRT, SKW, ENTP.
    pub fn as_array(&self) -> [f64; STATS_PER_LEVEL] {
        [
            self.energy,
            self.std_dev,
            self.mean,
            self.kurtosis,
            self.skewness,
            self.entropy,
        ]
    }
}

/// A labelled 66-value feature vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureVector {
    pub label: EventClass,
    pub values: Vec<f64>,
}

/// Computes the six statistics of a coefficient sequence.
pub fn level_stats(coeffs: &[f64]) -> Result<LevelStats, FeatureError> {
    let n = coeffs.len();
    if n < 2 {
        return Err(FeatureError::DegenerateSequence { len: n });
    }
    let nf = n as f64;
    let mut sum = 0.0;
    let mut energy = 0.0;
    let mut entropy = 0.0;
    for &c in coeffs {
        sum += c;
        let e2 = c * c;
        energy += e2;
        if e2 > 0.0 {
            entropy -= e2 * e2.ln();
        }
    }
    let mean = sum / nf;
    let mut m2 = 0.0;
    let mut m3 = 0.0;
    let mut m4 = 0.0;
    for &c in coeffs {
        let d = c - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    let std_dev = (m2 / (nf - 1.0)).sqrt();
    let (kurtosis, skewness) = if std_dev == 0.0 {
        (0.0, 0.0)
    } else {
        let s2 = std_dev * std_dev;
        ((m4 / nf) / (s2 * s2), (m3 / nf) / (s2 * std_dev))
    };
    Ok(LevelStats {
        energy,
        std_dev,
        mean,
        kurtosis,
        skewness,
        entropy,
    })
}

/// Builds the 66-value feature vector from an 11-level decomposition.
///
/// Values are ordered level-major: level 1's six statistics first.
pub fn extract(
    decomp: &WaveletDecomposition,
    label: EventClass,
) -> Result<FeatureVector, FeatureError> {
    if decomp.levels() != N_LEVELS {
        return Err(FeatureError::WrongLevelCount {
            got: decomp.levels(),
        });
    }
    let mut values = Vec::with_capacity(N_FEATURES);
    for detail in &decomp.details {
        values.extend_from_slice(&level_stats(detail)?.as_array());
    }
    Ok(FeatureVector { label, values })
}
