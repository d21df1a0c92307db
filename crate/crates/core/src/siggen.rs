//! Parametric synthesis of power-quality disturbance signals.
//!
//! Seventeen event classes are modelled on a common 50 Hz fundamental
//! sampled at 12.8 kHz for 10 cycles (2560 samples): the normal waveform
//! `S0`, eight single disturbances (`S1` sag through `S8` flicker) and
//! eight composite ones (`S9` sag + swell through `S16` harmonics +
//! transient). Each class has a fixed formula plus a parameter record
//! drawn uniformly from per-class ranges.
//!
//! Conventions baked into the formulas:
//!
//! * the unit step is right-continuous, `u(0) = 1`, so an event window
//!   `[start, end)` includes its first sample and excludes its last;
//! * envelope events multiply the fundamental; transient and harmonic
//!   terms add to it; composite classes combine both;
//! * notch/spike events subtract/add a train of `count` rectangular
//!   pulses of depth `depth * B`, aligned with the waveform polarity and
//!   repeating every `0.002 * count` seconds;
//! * the swell + interruption composite multiplies a `(1 + m1)` swell
//!   factor with a `(1 - m2)` interruption factor.
//!
//! # Example
//!
//! ```
//! use pqd_core::siggen::{generate_signal, EventClass, SignalSpec};
//!
//! let spec = SignalSpec::default();
//! let sag = generate_signal(EventClass::Sag, 42, &spec);
//! assert_eq!(sag.samples.len(), 2560);
//! ```

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seed::{self, STREAM_TEST, STREAM_TRAIN};

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Errors raised by signal synthesis.
#[derive(Debug, Error)]
pub enum SiggenError {
    /// A parameter lies outside the closed hull of its class range, or the
    /// parameter record has the wrong shape for the class.
    #[error("{class} parameter out of range: {detail}")]
    ParamOutOfRange { class: EventClass, detail: String },
    /// A dataset preset name was not recognized.
    #[error("unknown preset `{0}` (expected one of 11class, 13class, 16class)")]
    UnknownPreset(String),
}

/// Error returned when parsing an event-class code such as `"S7"` fails.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseClassError(pub String);

impl fmt::Display for ParseClassError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown class `{}` (expected S0..S16)", self.0)
    }
}

impl std::error::Error for ParseClassError {}

// ---------------------------------------------------------------------------
// Event classes
// ---------------------------------------------------------------------------

/// The seventeen signal classes, identified by the codes `S0`..`S16`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize,
)]
pub enum EventClass {
    /// S0: undisturbed fundamental.
    #[serde(rename = "S0")]
    Normal,
    /// S1: voltage sag (10 %–90 % dip over 2–8 cycles).
    #[serde(rename = "S1")]
    Sag,
    /// S2: voltage swell.
    #[serde(rename = "S2")]
    Swell,
    /// S3: momentary interruption (near-total dip).
    #[serde(rename = "S3")]
    Interruption,
    /// S4: oscillatory transient.
    #[serde(rename = "S4")]
    Transient,
    /// S5: harmonic distortion (3rd, 5th, 7th, 9th).
    #[serde(rename = "S5")]
    Harmonics,
    /// S6: periodic notches cut against the waveform polarity.
    #[serde(rename = "S6")]
    Notch,
    /// S7: periodic spikes added along the waveform polarity.
    #[serde(rename = "S7")]
    Spike,
    /// S8: flicker (low-frequency amplitude modulation).
    #[serde(rename = "S8")]
    Flicker,
    /// S9: sag and swell in independent windows.
    #[serde(rename = "S9")]
    SagSwell,
    /// S10: sag and momentary interruption.
    #[serde(rename = "S10")]
    SagInterruption,
    /// S11: swell and momentary interruption.
    #[serde(rename = "S11")]
    SwellInterruption,
    /// S12: sag with an oscillatory transient in the same window.
    #[serde(rename = "S12")]
    SagTransient,
    /// S13: swell with an oscillatory transient in the same window.
    #[serde(rename = "S13")]
    SwellTransient,
    /// S14: sag plus harmonic distortion.
    #[serde(rename = "S14")]
    SagHarmonics,
    /// S15: swell plus harmonic distortion.
    #[serde(rename = "S15")]
    SwellHarmonics,
    /// S16: harmonic distortion plus an oscillatory transient.
    #[serde(rename = "S16")]
    HarmonicsTransient,
}

impl EventClass {
    /// All classes in code order `S0..S16`.
    pub const ALL: [EventClass; 17] = [
        EventClass::Normal,
        EventClass::Sag,
        EventClass::Swell,
        EventClass::Interruption,
        EventClass::Transient,
        EventClass::Harmonics,
        EventClass::Notch,
        EventClass::Spike,
        EventClass::Flicker,
        EventClass::SagSwell,
        EventClass::SagInterruption,
        EventClass::SwellInterruption,
        EventClass::SagTransient,
        EventClass::SwellTransient,
        EventClass::SagHarmonics,
        EventClass::SwellHarmonics,
        EventClass::HarmonicsTransient,
    ];

    /// Position in [`EventClass::ALL`]; `S0` is 0, `S16` is 16.
    pub fn index(self) -> usize {
        Self::ALL.iter().position(|&c| c == self).unwrap()
    }

    /// The class code, `"S0"`..`"S16"`.
    pub fn code(self) -> &'static str {
        const CODES: [&str; 17] = [
            "S0", "S1", "S2", "S3", "S4", "S5", "S6", "S7", "S8", "S9", "S10", "S11", "S12",
            "S13", "S14", "S15", "S16",
        ];
        CODES[self.index()]
    }

    /// Class for a given index, if in range.
    pub fn from_index(index: usize) -> Option<EventClass> {
        Self::ALL.get(index).copied()
    }

    /// The disturbance set `S1..Sn` used by the n-class experiments.
    ///
    /// Panics if `n` is 0 or greater than 16.
    pub fn disturbance_set(n: usize) -> &'static [EventClass] {
        assert!((1..=16).contains(&n), "disturbance sets cover S1..S16");
        &Self::ALL[1..=n]
    }
}

impl fmt::Display for EventClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for EventClass {
    type Err = ParseClassError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_uppercase();
        Self::ALL
            .iter()
            .find(|c| c.code() == norm)
            .copied()
            .ok_or_else(|| ParseClassError(s.trim().to_string()))
    }
}

// ---------------------------------------------------------------------------
// Sampling grid
// ---------------------------------------------------------------------------

/// Sampling grid and fundamental of a synthesized signal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalSpec {
    /// Samples per second.
    pub sampling_rate_hz: f64,
    /// Record length in samples.
    pub n_samples: usize,
    /// Fundamental frequency in hertz.
    pub fundamental_hz: f64,
    /// Fundamental amplitude `B`.
    pub amplitude: f64,
}

impl Default for SignalSpec {
    /// 12.8 kHz, 2560 samples (10 cycles of 50 Hz), unit amplitude.
    fn default() -> Self {
        SignalSpec {
            sampling_rate_hz: 12_800.0,
            n_samples: 2560,
            fundamental_hz: 50.0,
            amplitude: 1.0,
        }
    }
}

impl SignalSpec {
    /// Fundamental period `T` in seconds.
    pub fn period_s(&self) -> f64 {
        1.0 / self.fundamental_hz
    }

    /// Record duration in seconds.
    pub fn duration_s(&self) -> f64 {
        self.n_samples as f64 / self.sampling_rate_hz
    }

    /// Time of sample `k` in seconds.
    pub fn t(&self, k: usize) -> f64 {
        k as f64 / self.sampling_rate_hz
    }
}

// ---------------------------------------------------------------------------
// Event parameters
// ---------------------------------------------------------------------------

/// A half-open event window `[start_s, end_s)` in seconds.
///
/// The window includes its first instant (the step convention `u(0) = 1`)
/// and excludes its last.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub start_s: f64,
    pub end_s: f64,
}

impl Window {
    /// Whether time `t` falls inside `[start_s, end_s)`.
    pub fn contains(&self, t: f64) -> bool {
        t >= self.start_s && t < self.end_s
    }

    /// Window length in seconds.
    pub fn duration_s(&self) -> f64 {
        self.end_s - self.start_s
    }
}

/// Amplitudes of the odd harmonics added by the harmonic classes.
///
/// The fundamental amplitude is fixed at 1; these scale the 3rd, 5th,
/// 7th and 9th harmonics and each lies in `[0, 0.3]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarmonicAmps {
    pub h3: f64,
    pub h5: f64,
    pub h7: f64,
    pub h9: f64,
}

/// Per-class parameter record.
///
/// Classes sharing a formula shape share a variant; the class passed to
/// [`generate`] selects the concrete range checks and signs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EventParams {
    /// `S0` — no parameters.
    Normal,
    /// `S1`/`S2`/`S3` — envelope change of `magnitude` inside `window`
    /// (sag and interruption dip, swell rises).
    Envelope { magnitude: f64, window: Window },
    /// `S4` — damped oscillation at `freq_hz` with time constant `tau_ms`
    /// (milliseconds), amplitude fixed at 5.
    OscillatoryTransient {
        amplitude: f64,
        freq_hz: f64,
        tau_ms: f64,
        window: Window,
    },
    /// `S5` — odd-harmonic distortion of the whole record.
    Harmonics { amps: HarmonicAmps },
    /// `S6`/`S7` — `count` rectangular pulses of depth `depth * B`; the
    /// first occupies `window`, repeats follow every `0.002 * count` s.
    PulseTrain {
        depth: f64,
        count: u32,
        window: Window,
    },
    /// `S8` — amplitude modulation of `depth` at `freq_hz`.
    Flicker { depth: f64, freq_hz: f64 },
    /// `S9`/`S10`/`S11` — two multiplicative envelope factors with
    /// independent windows (signs depend on the class).
    DoubleEnvelope {
        first: f64,
        second: f64,
        first_window: Window,
        second_window: Window,
    },
    /// `S12`/`S13` — envelope change and an additive oscillatory
    /// transient sharing one window.
    EnvelopeTransient {
        magnitude: f64,
        amplitude: f64,
        freq_hz: f64,
        tau_ms: f64,
        window: Window,
    },
    /// `S14`/`S15` — envelope change plus whole-record harmonics.
    EnvelopeHarmonics {
        magnitude: f64,
        amps: HarmonicAmps,
        window: Window,
    },
    /// `S16` — whole-record harmonics plus an oscillatory transient.
    HarmonicsTransient {
        amps: HarmonicAmps,
        amplitude: f64,
        freq_hz: f64,
        tau_ms: f64,
        window: Window,
    },
}

/// A fully synthesized, labelled signal.
#[derive(Debug, Clone)]
pub struct Signal {
    pub label: EventClass,
    pub seed: u64,
    pub params: EventParams,
    pub spec: SignalSpec,
    pub samples: Vec<f64>,
}

// ---------------------------------------------------------------------------
// Parameter ranges
// ---------------------------------------------------------------------------

/// Fixed amplitude of every oscillatory transient term.
pub const TRANSIENT_AMPLITUDE: f64 = 5.0;

const SAG_MAGNITUDE: (f64, f64) = (0.16, 0.95);
const SWELL_MAGNITUDE: (f64, f64) = (0.05, 0.8);
const INTERRUPTION_MAGNITUDE: (f64, f64) = (0.87, 1.0);
const TRANSIENT_FREQ_HZ: (f64, f64) = (10.0, 100.0);
const TRANSIENT_TAU_MS: (f64, f64) = (25.0, 100.0);
const HARMONIC_AMP: (f64, f64) = (0.0, 0.3);
const PULSE_DEPTH: (f64, f64) = (0.1, 0.4);
const PULSE_COUNT: (u32, u32) = (2, 9);
const FLICKER_DEPTH: (f64, f64) = (0.1, 0.2);
const FLICKER_FREQ_HZ: (f64, f64) = (2.0, 20.0);
/// Envelope-event window length, in fundamental periods.
const ENVELOPE_WINDOW_T: (f64, f64) = (2.0, 8.0);
/// Second window of the double-envelope composites, in periods.
const SECOND_WINDOW_T: (f64, f64) = (4.0, 9.0);
/// Standalone transient window length, in periods.
const TRANSIENT_WINDOW_T: (f64, f64) = (0.15, 10.0);
/// Notch/spike pulses: both edges within this many periods of the origin.
const PULSE_EDGE_LIMIT_T: f64 = 0.05;
/// Notch/spike pulse width, in periods.
const PULSE_WIDTH_T: (f64, f64) = (0.01, 0.05);

/// Envelope-magnitude range of the classes that dip or raise the envelope.
fn envelope_range(class: EventClass) -> (f64, f64) {
    match class {
        EventClass::Sag
        | EventClass::SagTransient
        | EventClass::SagHarmonics => SAG_MAGNITUDE,
        EventClass::Swell
        | EventClass::SwellTransient
        | EventClass::SwellHarmonics => SWELL_MAGNITUDE,
        EventClass::Interruption => INTERRUPTION_MAGNITUDE,
        _ => unreachable!("not an envelope class: {class}"),
    }
}

/// The two magnitude ranges of a double-envelope composite.
fn double_envelope_ranges(class: EventClass) -> ((f64, f64), (f64, f64)) {
    match class {
        EventClass::SagSwell => (SAG_MAGNITUDE, SWELL_MAGNITUDE),
        EventClass::SagInterruption => (SAG_MAGNITUDE, INTERRUPTION_MAGNITUDE),
        EventClass::SwellInterruption => (SWELL_MAGNITUDE, INTERRUPTION_MAGNITUDE),
        _ => unreachable!("not a double-envelope class: {class}"),
    }
}

// ---------------------------------------------------------------------------
// Parameter sampling
// ---------------------------------------------------------------------------

/// Uniform draw from the open interval `(lo, hi)`.
fn open_uniform(rng: &mut rand_chacha::ChaCha8Rng, lo: f64, hi: f64) -> f64 {
    use rand::Rng;
    debug_assert!(hi > lo);
    loop {
        let u: f64 = rng.random(); // [0, 1)
        if u != 0.0 {
            return lo + u * (hi - lo);
        }
    }
}

/// Samples a window whose duration (in periods) lies in `dur_t` and whose
/// extent fits inside `[0, limit_s]`.
fn sample_window(
    rng: &mut rand_chacha::ChaCha8Rng,
    dur_t: (f64, f64),
    period_s: f64,
    limit_s: f64,
) -> Window {
    let duration = open_uniform(rng, dur_t.0 * period_s, dur_t.1 * period_s);
    let start = open_uniform(rng, 0.0, limit_s - duration);
    Window {
        start_s: start,
        end_s: start + duration,
    }
}

fn sample_harmonics(rng: &mut rand_chacha::ChaCha8Rng) -> HarmonicAmps {
    let (lo, hi) = HARMONIC_AMP;
    // Drawn in fixed order: 3rd, 5th, 7th, 9th.
    HarmonicAmps {
        h3: open_uniform(rng, lo, hi),
        h5: open_uniform(rng, lo, hi),
        h7: open_uniform(rng, lo, hi),
        h9: open_uniform(rng, lo, hi),
    }
}

/// Draws a parameter record for `class` from the class's ranges.
///
/// The draw order within a class is fixed (magnitudes, then frequencies
/// and time constants, then windows), so a given `(class, seed)` pair
/// always produces the same record.
pub fn sample_params(class: EventClass, seed: u64, spec: &SignalSpec) -> EventParams {
    use rand::Rng;
    let mut rng = seed::rng(seed, &[]);
    let period = spec.period_s();
    let duration = spec.duration_s();
    match class {
        EventClass::Normal => EventParams::Normal,
        EventClass::Sag | EventClass::Swell | EventClass::Interruption => {
            let (lo, hi) = envelope_range(class);
            EventParams::Envelope {
                magnitude: open_uniform(&mut rng, lo, hi),
                window: sample_window(&mut rng, ENVELOPE_WINDOW_T, period, duration),
            }
        }
        EventClass::Transient => EventParams::OscillatoryTransient {
            amplitude: TRANSIENT_AMPLITUDE,
            freq_hz: open_uniform(&mut rng, TRANSIENT_FREQ_HZ.0, TRANSIENT_FREQ_HZ.1),
            tau_ms: open_uniform(&mut rng, TRANSIENT_TAU_MS.0, TRANSIENT_TAU_MS.1),
            window: sample_window(&mut rng, TRANSIENT_WINDOW_T, period, duration),
        },
        EventClass::Harmonics => EventParams::Harmonics {
            amps: sample_harmonics(&mut rng),
        },
        EventClass::Notch | EventClass::Spike => {
            let depth = open_uniform(&mut rng, PULSE_DEPTH.0, PULSE_DEPTH.1);
            let count = rng.random_range(PULSE_COUNT.0..=PULSE_COUNT.1);
            let window = sample_window(
                &mut rng,
                PULSE_WIDTH_T,
                period,
                PULSE_EDGE_LIMIT_T * period,
            );
            EventParams::PulseTrain {
                depth,
                count,
                window,
            }
        }
        EventClass::Flicker => EventParams::Flicker {
            depth: open_uniform(&mut rng, FLICKER_DEPTH.0, FLICKER_DEPTH.1),
            freq_hz: open_uniform(&mut rng, FLICKER_FREQ_HZ.0, FLICKER_FREQ_HZ.1),
        },
        EventClass::SagSwell | EventClass::SagInterruption | EventClass::SwellInterruption => {
            let ((lo1, hi1), (lo2, hi2)) = double_envelope_ranges(class);
            let first = open_uniform(&mut rng, lo1, hi1);
            let second = open_uniform(&mut rng, lo2, hi2);
            // The two windows are sampled independently and may overlap.
            let first_window = sample_window(&mut rng, ENVELOPE_WINDOW_T, period, duration);
            let second_window = sample_window(&mut rng, SECOND_WINDOW_T, period, duration);
            EventParams::DoubleEnvelope {
                first,
                second,
                first_window,
                second_window,
            }
        }
        EventClass::SagTransient | EventClass::SwellTransient => {
            let (lo, hi) = envelope_range(class);
            EventParams::EnvelopeTransient {
                magnitude: open_uniform(&mut rng, lo, hi),
                amplitude: TRANSIENT_AMPLITUDE,
                freq_hz: open_uniform(&mut rng, TRANSIENT_FREQ_HZ.0, TRANSIENT_FREQ_HZ.1),
                tau_ms: open_uniform(&mut rng, TRANSIENT_TAU_MS.0, TRANSIENT_TAU_MS.1),
                window: sample_window(&mut rng, ENVELOPE_WINDOW_T, period, duration),
            }
        }
        EventClass::SagHarmonics | EventClass::SwellHarmonics => {
            let (lo, hi) = envelope_range(class);
            EventParams::EnvelopeHarmonics {
                magnitude: open_uniform(&mut rng, lo, hi),
                amps: sample_harmonics(&mut rng),
                window: sample_window(&mut rng, ENVELOPE_WINDOW_T, period, duration),
            }
        }
        EventClass::HarmonicsTransient => EventParams::HarmonicsTransient {
            amps: sample_harmonics(&mut rng),
            amplitude: TRANSIENT_AMPLITUDE,
            freq_hz: open_uniform(&mut rng, TRANSIENT_FREQ_HZ.0, TRANSIENT_FREQ_HZ.1),
            tau_ms: open_uniform(&mut rng, TRANSIENT_TAU_MS.0, TRANSIENT_TAU_MS.1),
            window: sample_window(&mut rng, TRANSIENT_WINDOW_T, period, duration),
        },
    }
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

fn err(class: EventClass, detail: impl Into<String>) -> SiggenError {
    SiggenError::ParamOutOfRange {
        class,
        detail: detail.into(),
    }
}

/// `v` within the closed hull `[lo, hi]`? Sampling uses open intervals, but
/// hand-built records may sit exactly on an endpoint (a zeroed harmonic
/// amplitude, a full-depth interruption), so validation accepts the hull.
fn in_hull(v: f64, (lo, hi): (f64, f64)) -> bool {
    v >= lo && v <= hi
}

fn check_magnitude(
    class: EventClass,
    name: &str,
    v: f64,
    range: (f64, f64),
) -> Result<(), SiggenError> {
    if in_hull(v, range) {
        Ok(())
    } else {
        Err(err(
            class,
            format!("{name} = {v} outside [{}, {}]", range.0, range.1),
        ))
    }
}

fn check_window(
    class: EventClass,
    name: &str,
    w: &Window,
    dur_t: (f64, f64),
    period_s: f64,
    limit_s: f64,
) -> Result<(), SiggenError> {
    if !(w.start_s >= 0.0 && w.start_s < w.end_s && w.end_s <= limit_s) {
        return Err(err(
            class,
            format!(
                "{name} [{}, {}) must satisfy 0 <= start < end <= {limit_s}",
                w.start_s, w.end_s
            ),
        ));
    }
    let d = w.duration_s();
    if !in_hull(d, (dur_t.0 * period_s, dur_t.1 * period_s)) {
        return Err(err(
            class,
            format!(
                "{name} duration {d} s outside [{}, {}] s",
                dur_t.0 * period_s,
                dur_t.1 * period_s
            ),
        ));
    }
    Ok(())
}

fn check_harmonics(class: EventClass, amps: &HarmonicAmps) -> Result<(), SiggenError> {
    for (name, v) in [
        ("h3", amps.h3),
        ("h5", amps.h5),
        ("h7", amps.h7),
        ("h9", amps.h9),
    ] {
        check_magnitude(class, name, v, HARMONIC_AMP)?;
    }
    Ok(())
}

fn check_transient(
    class: EventClass,
    amplitude: f64,
    freq_hz: f64,
    tau_ms: f64,
) -> Result<(), SiggenError> {
    if amplitude != TRANSIENT_AMPLITUDE {
        return Err(err(
            class,
            format!("transient amplitude {amplitude} is fixed at {TRANSIENT_AMPLITUDE}"),
        ));
    }
    check_magnitude(class, "freq_hz", freq_hz, TRANSIENT_FREQ_HZ)?;
    check_magnitude(class, "tau_ms", tau_ms, TRANSIENT_TAU_MS)
}

fn shape_error(class: EventClass) -> SiggenError {
    err(class, "parameter record has the wrong shape for this class")
}

/// Validates a parameter record against the ranges of `class`.
pub fn validate_params(
    class: EventClass,
    params: &EventParams,
    spec: &SignalSpec,
) -> Result<(), SiggenError> {
    let period = spec.period_s();
    let duration = spec.duration_s();
    match (class, params) {
        (EventClass::Normal, EventParams::Normal) => Ok(()),
        (
            EventClass::Sag | EventClass::Swell | EventClass::Interruption,
            EventParams::Envelope { magnitude, window },
        ) => {
            check_magnitude(class, "magnitude", *magnitude, envelope_range(class))?;
            check_window(class, "window", window, ENVELOPE_WINDOW_T, period, duration)
        }
        (
            EventClass::Transient,
            EventParams::OscillatoryTransient {
                amplitude,
                freq_hz,
                tau_ms,
                window,
            },
        ) => {
            check_transient(class, *amplitude, *freq_hz, *tau_ms)?;
            check_window(class, "window", window, TRANSIENT_WINDOW_T, period, duration)
        }
        (EventClass::Harmonics, EventParams::Harmonics { amps }) => check_harmonics(class, amps),
        (
            EventClass::Notch | EventClass::Spike,
            EventParams::PulseTrain {
                depth,
                count,
                window,
            },
        ) => {
            check_magnitude(class, "depth", *depth, PULSE_DEPTH)?;
            if !(PULSE_COUNT.0..=PULSE_COUNT.1).contains(count) {
                return Err(err(
                    class,
                    format!("count = {count} outside [{}, {}]", PULSE_COUNT.0, PULSE_COUNT.1),
                ));
            }
            check_window(
                class,
                "window",
                window,
                PULSE_WIDTH_T,
                period,
                PULSE_EDGE_LIMIT_T * period,
            )
        }
        (EventClass::Flicker, EventParams::Flicker { depth, freq_hz }) => {
            check_magnitude(class, "depth", *depth, FLICKER_DEPTH)?;
            check_magnitude(class, "freq_hz", *freq_hz, FLICKER_FREQ_HZ)
        }
        (
            EventClass::SagSwell | EventClass::SagInterruption | EventClass::SwellInterruption,
            EventParams::DoubleEnvelope {
                first,
                second,
                first_window,
                second_window,
            },
        ) => {
            let (r1, r2) = double_envelope_ranges(class);
            check_magnitude(class, "first", *first, r1)?;
            check_magnitude(class, "second", *second, r2)?;
            check_window(
                class,
                "first_window",
                first_window,
                ENVELOPE_WINDOW_T,
                period,
                duration,
            )?;
            check_window(
                class,
                "second_window",
                second_window,
                SECOND_WINDOW_T,
                period,
                duration,
            )
        }
        (
            EventClass::SagTransient | EventClass::SwellTransient,
            EventParams::EnvelopeTransient {
                magnitude,
                amplitude,
                freq_hz,
                tau_ms,
                window,
            },
        ) => {
            check_magnitude(class, "magnitude", *magnitude, envelope_range(class))?;
            check_transient(class, *amplitude, *freq_hz, *tau_ms)?;
            check_window(class, "window", window, ENVELOPE_WINDOW_T, period, duration)
        }
        (
            EventClass::SagHarmonics | EventClass::SwellHarmonics,
            EventParams::EnvelopeHarmonics {
                magnitude,
                amps,
                window,
            },
        ) => {
            check_magnitude(class, "magnitude", *magnitude, envelope_range(class))?;
            check_harmonics(class, amps)?;
            check_window(class, "window", window, ENVELOPE_WINDOW_T, period, duration)
        }
        (
            EventClass::HarmonicsTransient,
            EventParams::HarmonicsTransient {
                amps,
                amplitude,
                freq_hz,
                tau_ms,
                window,
            },
        ) => {
            check_harmonics(class, amps)?;
            check_transient(class, *amplitude, *freq_hz, *tau_ms)?;
            check_window(class, "window", window, TRANSIENT_WINDOW_T, period, duration)
        }
        _ => Err(shape_error(class)),
    }
}

// ---------------------------------------------------------------------------
// Synthesis
// ---------------------------------------------------------------------------

/// Waveform polarity: +1, -1, or 0 exactly at a zero crossing.
fn polarity(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Damped-oscillation term, zero outside the window:
/// `amp * exp(-(t - start) / (tau_ms / 1000)) * sin(2*pi*freq*t)`.
fn transient_term(t: f64, amplitude: f64, freq_hz: f64, tau_ms: f64, window: &Window) -> f64 {
    if window.contains(t) {
        amplitude * (-(t - window.start_s) / (tau_ms * 1e-3)).exp() * (2.0 * PI * freq_hz * t).sin()
    } else {
        0.0
    }
}

/// Whole-record harmonic series with unit fundamental:
/// `sin(w0*t) + h3*sin(3*w0*t) + h5*sin(5*w0*t) + h7*sin(7*w0*t) + h9*sin(9*w0*t)`.
fn harmonic_series(w0t: f64, amps: &HarmonicAmps) -> f64 {
    w0t.sin()
        + amps.h3 * (3.0 * w0t).sin()
        + amps.h5 * (5.0 * w0t).sin()
        + amps.h7 * (7.0 * w0t).sin()
        + amps.h9 * (9.0 * w0t).sin()
}

/// Whether `t` falls inside any of the `count` repeated pulses.
fn in_pulse_train(t: f64, window: &Window, count: u32) -> bool {
    let step = 0.002 * count as f64;
    (0..count).any(|k| {
        let shift = k as f64 * step;
        t >= window.start_s + shift && t < window.end_s + shift
    })
}

/// Synthesizes the sample sequence for `class` with explicit parameters.
///
/// Fails with [`SiggenError::ParamOutOfRange`] if the record does not match
/// the class or a value lies outside its range.
pub fn generate(
    class: EventClass,
    params: &EventParams,
    spec: &SignalSpec,
) -> Result<Vec<f64>, SiggenError> {
    validate_params(class, params, spec)?;
    let b = spec.amplitude;
    let w0 = 2.0 * PI * spec.fundamental_hz;
    let samples = (0..spec.n_samples)
        .map(|k| {
            let t = spec.t(k);
            let base = b * (w0 * t).sin();
            match (class, params) {
                (EventClass::Normal, EventParams::Normal) => base,
                (EventClass::Sag | EventClass::Interruption, EventParams::Envelope { magnitude, window }) => {
                    let w = if window.contains(t) { 1.0 } else { 0.0 };
                    (1.0 - magnitude * w) * base
                }
                (EventClass::Swell, EventParams::Envelope { magnitude, window }) => {
                    let w = if window.contains(t) { 1.0 } else { 0.0 };
                    (1.0 + magnitude * w) * base
                }
                (
                    EventClass::Transient,
                    EventParams::OscillatoryTransient {
                        amplitude,
                        freq_hz,
                        tau_ms,
                        window,
                    },
                ) => base + transient_term(t, *amplitude, *freq_hz, *tau_ms, window),
                (EventClass::Harmonics, EventParams::Harmonics { amps }) => {
                    b * harmonic_series(w0 * t, amps)
                }
                (
                    EventClass::Notch | EventClass::Spike,
                    EventParams::PulseTrain {
                        depth,
                        count,
                        window,
                    },
                ) => {
                    if in_pulse_train(t, window, *count) {
                        let sign = if class == EventClass::Notch { -1.0 } else { 1.0 };
                        base + sign * polarity(base) * depth * b
                    } else {
                        base
                    }
                }
                (EventClass::Flicker, EventParams::Flicker { depth, freq_hz }) => {
                    (1.0 + depth * (2.0 * PI * freq_hz * t).sin()) * base
                }
                (
                    EventClass::SagSwell
                    | EventClass::SagInterruption
                    | EventClass::SwellInterruption,
                    EventParams::DoubleEnvelope {
                        first,
                        second,
                        first_window,
                        second_window,
                    },
                ) => {
                    let w1 = if first_window.contains(t) { 1.0 } else { 0.0 };
                    let w2 = if second_window.contains(t) { 1.0 } else { 0.0 };
                    let (f1, f2) = match class {
                        EventClass::SagSwell => (1.0 - first * w1, 1.0 + second * w2),
                        EventClass::SagInterruption => (1.0 - first * w1, 1.0 - second * w2),
                        EventClass::SwellInterruption => (1.0 + first * w1, 1.0 - second * w2),
                        _ => unreachable!(),
                    };
                    f1 * f2 * base
                }
                (
                    EventClass::SagTransient | EventClass::SwellTransient,
                    EventParams::EnvelopeTransient {
                        magnitude,
                        amplitude,
                        freq_hz,
                        tau_ms,
                        window,
                    },
                ) => {
                    let w = if window.contains(t) { 1.0 } else { 0.0 };
                    let sign = if class == EventClass::SagTransient { -1.0 } else { 1.0 };
                    (1.0 + sign * magnitude * w) * base
                        + transient_term(t, *amplitude, *freq_hz, *tau_ms, window)
                }
                (
                    EventClass::SagHarmonics | EventClass::SwellHarmonics,
                    EventParams::EnvelopeHarmonics {
                        magnitude,
                        amps,
                        window,
                    },
                ) => {
                    let w = if window.contains(t) { 1.0 } else { 0.0 };
                    let sign = if class == EventClass::SagHarmonics { -1.0 } else { 1.0 };
                    (1.0 + sign * magnitude * w) * base + b * harmonic_series(w0 * t, amps)
                }
                (
                    EventClass::HarmonicsTransient,
                    EventParams::HarmonicsTransient {
                        amps,
                        amplitude,
                        freq_hz,
                        tau_ms,
                        window,
                    },
                ) => {
                    b * harmonic_series(w0 * t, amps)
                        + transient_term(t, *amplitude, *freq_hz, *tau_ms, window)
                }
                // validate_params has already rejected mismatched shapes.
                _ => unreachable!("validated params match the class"),
            }
        })
        .collect();
    Ok(samples)
}

/// Samples parameters for `(class, seed)` and synthesizes the signal.
pub fn generate_signal(class: EventClass, seed: u64, spec: &SignalSpec) -> Signal {
    let params = sample_params(class, seed, spec);
    let samples =
        generate(class, &params, spec).expect("sampled parameters satisfy their class ranges");
    Signal {
        label: class,
        seed,
        params,
        spec: spec.clone(),
        samples,
    }
}

// ---------------------------------------------------------------------------
// Datasets
// ---------------------------------------------------------------------------

/// A named experiment preset: `n` disturbance classes with fixed train and
/// test totals, split as evenly as possible across classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Preset {
    pub name: &'static str,
    pub n_classes: usize,
    pub train_total: usize,
    pub test_total: usize,
}

/// The three standard presets.
pub const PRESETS: [Preset; 3] = [
    Preset {
        name: "11class",
        n_classes: 11,
        train_total: 3254,
        test_total: 815,
    },
    Preset {
        name: "13class",
        n_classes: 13,
        train_total: 3510,
        test_total: 879,
    },
    Preset {
        name: "16class",
        n_classes: 16,
        train_total: 4353,
        test_total: 1090,
    },
];

/// Looks up a preset by name.
pub fn preset(name: &str) -> Result<Preset, SiggenError> {
    PRESETS
        .iter()
        .find(|p| p.name == name)
        .copied()
        .ok_or_else(|| SiggenError::UnknownPreset(name.to_string()))
}

/// Splits `total` across `n` classes as evenly as possible, giving the
/// remainder to the lowest class indices.
pub fn spread_counts(total: usize, n: usize) -> Vec<usize> {
    let base = total / n;
    let rem = total % n;
    (0..n).map(|i| base + usize::from(i < rem)).collect()
}

/// What to synthesize: either a named preset (which yields separate train
/// and test sets) or explicit per-class counts (a single pool).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DatasetSpec {
    /// Preset name; when set, `counts` is ignored.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    /// Explicit per-class signal counts.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub counts: BTreeMap<EventClass, usize>,
    /// Master seed; per-signal seeds derive from it.
    pub master_seed: u64,
    /// Sampling grid (defaults to 12.8 kHz / 2560 samples / 50 Hz).
    #[serde(default)]
    pub signal: SignalSpec,
}

impl DatasetSpec {
    /// A preset dataset spec.
    pub fn from_preset(name: &str, master_seed: u64) -> Result<Self, SiggenError> {
        preset(name)?;
        Ok(DatasetSpec {
            preset: Some(name.to_string()),
            counts: BTreeMap::new(),
            master_seed,
            signal: SignalSpec::default(),
        })
    }

    /// A custom dataset spec with explicit per-class counts.
    pub fn from_counts(counts: BTreeMap<EventClass, usize>, master_seed: u64) -> Self {
        DatasetSpec {
            preset: None,
            counts,
            master_seed,
            signal: SignalSpec::default(),
        }
    }
}

/// Synthesized signals, split into train and test sets.
///
/// Custom (non-preset) specs fill only `train`.
#[derive(Debug, Clone, Default)]
pub struct LabeledDataset {
    pub train: Vec<Signal>,
    pub test: Vec<Signal>,
}

/// Generates one stream (train or test) for the given per-class counts.
///
/// Signals are synthesized in parallel; per-signal seeds are derived from
/// `(master_seed, stream, class index, position)`, so the result does not
/// depend on scheduling.
pub fn generate_stream(
    classes: &[EventClass],
    counts: &[usize],
    master_seed: u64,
    stream: u64,
    spec: &SignalSpec,
) -> Vec<Signal> {
    assert_eq!(classes.len(), counts.len());
    let jobs: Vec<(EventClass, usize)> = classes
        .iter()
        .zip(counts)
        .flat_map(|(&class, &count)| (0..count).map(move |i| (class, i)))
        .collect();
    jobs.par_iter()
        .map(|&(class, i)| {
            let s = seed::signal_seed(master_seed, stream, class.index(), i);
            generate_signal(class, s, spec)
        })
        .collect()
}

/// Generates the dataset described by `spec`.
pub fn generate_dataset(spec: &DatasetSpec) -> Result<LabeledDataset, SiggenError> {
    if let Some(name) = &spec.preset {
        let p = preset(name)?;
        let classes = EventClass::disturbance_set(p.n_classes);
        let train_counts = spread_counts(p.train_total, p.n_classes);
        let test_counts = spread_counts(p.test_total, p.n_classes);
        Ok(LabeledDataset {
            train: generate_stream(classes, &train_counts, spec.master_seed, STREAM_TRAIN, &spec.signal),
            test: generate_stream(classes, &test_counts, spec.master_seed, STREAM_TEST, &spec.signal),
        })
    } else {
        let classes: Vec<EventClass> = spec.counts.keys().copied().collect();
        let counts: Vec<usize> = spec.counts.values().copied().collect();
        Ok(LabeledDataset {
            train: generate_stream(&classes, &counts, spec.master_seed, STREAM_TRAIN, &spec.signal),
            test: Vec::new(),
        })
    }
}

// ---------------------------------------------------------------------------
// Tests
// ---------------------------------------------------------------------------
