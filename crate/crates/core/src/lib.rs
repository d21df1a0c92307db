//! Power-quality disturbance (PQD) toolkit.
//!
//! The crate covers the full classification pipeline for synthetic
//! power-quality events:
//!
//! 1. [`siggen`] — parametric synthesis of 17 disturbance classes
//!    (`S0` normal through `S16` harmonics + transient) at 12.8 kHz.
//! 2. [`dwt`] — 11-level multiresolution analysis with the 8-tap
//!    Daubechies-4 filter bank and symmetric boundary extension.
//! 3. [`features`] — six statistics per detail level, 66 values per signal.
//! 4. [`oselm`] — an online-sequential extreme learning machine trained
//!    chunk-by-chunk with recursive least squares.
//!
//! [`harness`] orchestrates datasets, training, evaluation and sweeps;
//! [`io`] owns every on-disk format (CSV datasets and features, JSON
//! models, specs and reports, comparison tables).
//!
//! All randomness descends from explicit `u64` seeds (see [`seed`]), so
//! datasets, models and experiment reports are bit-reproducible regardless
//! of how the work is scheduled.

pub mod dwt;
pub mod features;
pub mod harness;
pub mod io;
pub mod oselm;
pub mod seed;
pub mod siggen;

pub use dwt::{DwtError, WaveletDecomposition};
pub use features::{FeatureError, FeatureVector, LevelStats};
pub use harness::{EvalReport, ExperimentSpec, HarnessError};
pub use io::IoError;
pub use oselm::{ActivationKind, OselmError, OselmModel};
pub use siggen::{DatasetSpec, EventClass, EventParams, Signal, SignalSpec, SiggenError};
