//! Discrete wavelet transform: multi-level analysis and reconstruction
//! with the 8-tap Daubechies-4 filter bank.
//!
//! Each analysis level extends the input by 7 samples per side with
//! half-point symmetric reflection (`... x1 x0 | x0 x1 ...`), convolves
//! with the low- and high-pass filters, and keeps the odd phase of the
//! result, so a length-`n` input yields `floor((n + 7) / 2)` coefficients
//! per branch. The synthesis step is the exact adjoint of the analysis
//! step; because the translated filter pair forms an orthonormal system,
//! applying it level by level reconstructs the original samples to
//! floating-point rounding.
//!
//! On the default 2560-sample grid at 12.8 kHz, detail level `i` covers
//! the frequency band `fs / 2^(i+1) .. fs / 2^i`; the 50 Hz fundamental
//! falls on the boundary of levels 7 and 8, and the low-order harmonics
//! occupy levels 5–7.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised by decomposition and reconstruction.
#[derive(Debug, Error)]
pub enum DwtError {
    /// Decomposing further would feed the filters fewer samples than taps.
    #[error("level {level} input has {len} samples, fewer than the {filter_len}-tap filter")]
    TooManyLevels {
        level: usize,
        len: usize,
        filter_len: usize,
    },
    /// A decomposition's coefficient lengths are inconsistent.
    #[error("malformed decomposition: {0}")]
    MalformedDecomposition(String),
}

/// Daubechies-4 scaling coefficients in natural order (sum `sqrt(2)`).
const DB4_SCALING: [f64; 8] = [
    0.23037781330885523,
    0.71484657055254153,
    0.63088076792959036,
    -0.027983769416983849,
    -0.18703481171888114,
    0.030841381835986965,
    0.032883011666982945,
    -0.010597401784997278,
];

/// Filter taps per branch.
pub const FILTER_LEN: usize = 8;

/// An orthonormal analysis filter pair.
///
/// `highpass_g` is derived from `lowpass_h` by the quadrature-mirror
/// relation `g[k] = (-1)^k * h[N-1-k]`, which gives the high-pass branch
/// four vanishing moments: it annihilates polynomials up to degree 3.
#[derive(Debug, Clone, PartialEq)]
pub struct FilterPair {
    pub lowpass_h: [f64; FILTER_LEN],
    pub highpass_g: [f64; FILTER_LEN],
}

impl FilterPair {
    /// The Daubechies-4 analysis pair (8 taps, 4 vanishing moments).
    pub fn db4() -> FilterPair {
        // Analysis low-pass is the reversed scaling filter.
        let mut h = DB4_SCALING;
        h.reverse();
        FilterPair::from_lowpass(h)
    }

    /// Builds the pair from an analysis low-pass filter via the QMF rule.
    pub fn from_lowpass(lowpass_h: [f64; FILTER_LEN]) -> FilterPair {
        let mut highpass_g = [0.0; FILTER_LEN];
        for (k, g) in highpass_g.iter_mut().enumerate() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            *g = sign * lowpass_h[FILTER_LEN - 1 - k];
        }
        FilterPair {
            lowpass_h,
            highpass_g,
        }
    }
}

/// Boundary handling used by the transform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryMode {
    /// Half-point symmetric reflection: `... x1 x0 | x0 x1 ...`.
    Symmetric,
}

/// A multi-level wavelet decomposition.
///
/// `details[0]` is the level-1 (finest) detail band; `approx` is the
/// approximation left after the deepest level. Lengths follow the
/// recurrence `len_i = floor((len_(i-1) + 7) / 2)` from `original_length`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WaveletDecomposition {
    pub details: Vec<Vec<f64>>,
    pub approx: Vec<f64>,
    pub original_length: usize,
    pub boundary: BoundaryMode,
}

impl WaveletDecomposition {
    /// Number of decomposition levels.
    pub fn levels(&self) -> usize {
        self.details.len()
    }

    /// Checks the length chain; `Err` means the structure was tampered with
    /// or assembled inconsistently.
    pub fn validate(&self) -> Result<(), DwtError> {
        if self.details.is_empty() {
            return Err(DwtError::MalformedDecomposition(
                "no detail levels".to_string(),
            ));
        }
        let mut len = self.original_length;
        for (i, d) in self.details.iter().enumerate() {
            let expect = coeff_len(len);
            if d.len() != expect {
                return Err(DwtError::MalformedDecomposition(format!(
                    "detail level {} has {} coefficients, expected {expect}",
                    i + 1,
                    d.len()
                )));
            }
            len = expect;
        }
        if self.approx.len() != len {
            return Err(DwtError::MalformedDecomposition(format!(
                "approximation has {} coefficients, expected {len}",
                self.approx.len()
            )));
        }
        Ok(())
    }
}

/// Coefficients produced by one analysis step on `n` samples.
pub fn coeff_len(n: usize) -> usize {
    (n + FILTER_LEN - 1) / 2
}

/// Frequency band `(low_hz, high_hz)` covered by detail level `level`
/// (1-based) at the given sampling rate.
pub fn detail_band_hz(sampling_rate_hz: f64, level: usize) -> (f64, f64) {
    let high = sampling_rate_hz / 2f64.powi(level as i32);
    (high / 2.0, high)
}

/// Half-point symmetric extension lookup: index `t` may run from `-n`
/// to `2n - 1`.
fn reflect(t: isize, n: usize) -> usize {
    let n = n as isize;
    debug_assert!(t >= -n && t < 2 * n);
    let r = if t < 0 {
        -t - 1
    } else if t >= n {
        2 * n - 1 - t
    } else {
        t
    };
    r as usize
}

/// One analysis step: returns `(approx, detail)` of length `coeff_len(n)`.
fn analyze_step(x: &[f64], filters: &FilterPair) -> (Vec<f64>, Vec<f64>) {
    let n = x.len();
    let out = coeff_len(n);
    let mut approx = vec![0.0; out];
    let mut detail = vec![0.0; out];
    for i in 0..out {
        let mut a = 0.0;
        let mut d = 0.0;
        // Convolution sampled at the odd phase: y[i] = sum_j f[j] x[2i+1-j].
        for j in 0..FILTER_LEN {
            let v = x[reflect(2 * i as isize + 1 - j as isize, n)];
            a += filters.lowpass_h[j] * v;
            d += filters.highpass_g[j] * v;
        }
        approx[i] = a;
        detail[i] = d;
    }
    (approx, detail)
}

/// One synthesis step: the adjoint of [`analyze_step`], cropped to
/// `target_len` (the length of the level's original input).
fn synthesize_step(
    approx: &[f64],
    detail: &[f64],
    target_len: usize,
    filters: &FilterPair,
) -> Vec<f64> {
    debug_assert_eq!(approx.len(), detail.len());
    let m = approx.len();
    let mut x = vec![0.0; target_len];
    for (t, out) in x.iter_mut().enumerate() {
        // Coefficients i with filter support covering t: 0 <= 2i+1-t < 8.
        let i_min = t / 2;
        let i_max = ((t + FILTER_LEN - 2) / 2).min(m - 1);
        let mut acc = 0.0;
        for i in i_min..=i_max {
            let j = 2 * i + 1 - t;
            acc += approx[i] * filters.lowpass_h[j] + detail[i] * filters.highpass_g[j];
        }
        *out = acc;
    }
    x
}

/// Decomposes `samples` into `levels` detail bands plus an approximation.
///
/// Fails with [`DwtError::TooManyLevels`] as soon as a level would receive
/// fewer samples than the filter has taps.
pub fn decompose(samples: &[f64], levels: usize) -> Result<WaveletDecomposition, DwtError> {
    assert!(levels >= 1, "decompose needs at least one level");
    let filters = FilterPair::db4();
    let mut details = Vec::with_capacity(levels);
    let mut current = samples.to_vec();
    for level in 1..=levels {
        if current.len() < FILTER_LEN {
            return Err(DwtError::TooManyLevels {
                level,
                len: current.len(),
                filter_len: FILTER_LEN,
            });
        }
        let (approx, detail) = analyze_step(&current, &filters);
        details.push(detail);
        current = approx;
    }
    Ok(WaveletDecomposition {
        details,
        approx: current,
        original_length: samples.len(),
        boundary: BoundaryMode::Symmetric,
    })
}

/// Inverts a decomposition back to the original sample count.
pub fn reconstruct(decomp: &WaveletDecomposition) -> Result<Vec<f64>, DwtError> {
    decomp.validate()?;
    let filters = FilterPair::db4();
    // Input length of each level: len_0 = original, len_i = coeff_len(len_(i-1)).
    let mut lens = Vec::with_capacity(decomp.levels());
    let mut len = decomp.original_length;
    for _ in 0..decomp.levels() {
        lens.push(len);
        len = coeff_len(len);
    }
    let mut current = decomp.approx.clone();
    for (level, detail) in decomp.details.iter().enumerate().rev() {
        current = synthesize_step(&current, detail, lens[level], &filters);
    }
    Ok(current)
}
