//! Readers and writers for the toolkit's on-disk artifacts.
//!
//! Formats owned here:
//! - dataset CSV with header `label,seed,s0,...,s2559`, one row per signal,
//!   plus a sidecar JSON of sampled event parameters keyed by signal seed;
//! - feature CSV with header `label,f1,...,f66` and a leading comment line
//!   documenting the column ordering;
//! - decomposition dump JSON mapping level names (`D1`..`D11`, `A11`) to
//!   coefficient lists;
//! - model, dataset-spec, experiment-spec, and evaluation-report JSON;
//! - comparison tables: dataset sizing, activation comparison, and
//!   hidden-node sweep CSVs, each with optional side-by-side reference
//!   columns.
//!
//! Every writer goes through an atomic temp-file + rename in the target
//! directory, so readers never observe a partially written file. All numeric
//! formatting uses the shortest round-trip representation, making outputs
//! byte-deterministic for fixed inputs.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dwt::WaveletDecomposition;
use crate::features::{FeatureVector, N_FEATURES};
use crate::harness::{ActivationSummary, EvalReport, ExperimentSpec, SweepRow};
use crate::oselm::{ActivationKind, OselmModel};
use crate::siggen::{DatasetSpec, EventClass, EventParams, Signal};

/// Errors from reading or writing toolkit artifacts.
#[derive(Debug, Error)]
pub enum IoError {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("json error on {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("{path}:{line}: {message}")]
    Malformed {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

impl IoError {
    fn io(path: &Path, source: std::io::Error) -> Self {
        IoError::Io { path: path.to_owned(), source }
    }

    fn json(path: &Path, source: serde_json::Error) -> Self {
        IoError::Json { path: path.to_owned(), source }
    }

    fn malformed(path: &Path, line: usize, message: impl Into<String>) -> Self {
        IoError::Malformed { path: path.to_owned(), line, message: message.into() }
    }
}

// ---------------------------------------------------------------------------
// Atomic writes
// ---------------------------------------------------------------------------

/// Writes `bytes` to `path` atomically: the content lands in a temporary
/// file in the same directory and is renamed over the target, so concurrent
/// readers see either the old file or the complete new one.
pub fn atomic_write(path: &Path, bytes: &[u8]) -> Result<(), IoError> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| IoError::io(path, e))?;
    std::io::Write::write_all(&mut tmp, bytes).map_err(|e| IoError::io(path, e))?;
    tmp.persist(path).map_err(|e| IoError::io(path, e.error))?;
    Ok(())
}

fn read_to_string(path: &Path) -> Result<String, IoError> {
    std::fs::read_to_string(path).map_err(|e| IoError::io(path, e))
}

fn write_json_pretty<T: Serialize>(path: &Path, value: &T) -> Result<(), IoError> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| IoError::json(path, e))?;
    bytes.push(b'\n');
    atomic_write(path, &bytes)
}

fn load_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, IoError> {
    serde_json::from_str(&read_to_string(path)?).map_err(|e| IoError::json(path, e))
}

// ---------------------------------------------------------------------------
// Dataset CSV + parameter sidecar
// ---------------------------------------------------------------------------

/// One row of a dataset CSV: the label, the signal's derived seed, and the
/// raw samples. Event parameters travel in the sidecar JSON, keyed by seed.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalRow {
    pub label: EventClass,
    pub seed: u64,
    pub samples: Vec<f64>,
}

impl From<&Signal> for SignalRow {
    fn from(s: &Signal) -> Self {
        SignalRow { label: s.label, seed: s.seed, samples: s.samples.clone() }
    }
}

/// Writes signals as CSV with header `label,seed,s0,...,s{N-1}`.
pub fn write_dataset_csv(path: &Path, signals: &[Signal]) -> Result<(), IoError> {
    let n = signals.first().map_or(0, |s| s.samples.len());
    let mut out = String::from("label,seed");
    for k in 0..n {
        let _ = write!(out, ",s{k}");
    }
    out.push('\n');
    for s in signals {
        let _ = write!(out, "{},{}", s.label, s.seed);
        for v in &s.samples {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    atomic_write(path, out.as_bytes())
}

/// Reads a dataset CSV produced by [`write_dataset_csv`]. Comment lines
/// starting with `#` are skipped; every row must parse to a known class
/// label, a seed, and the same number of samples as the header declares.
pub fn read_dataset_csv(path: &Path) -> Result<Vec<SignalRow>, IoError> {
    let text = read_to_string(path)?;
    let mut rows = Vec::new();
    let mut width: Option<usize> = None;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if line.starts_with('#') || line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if width.is_none() {
            if fields.first() != Some(&"label") || fields.get(1) != Some(&"seed") {
                return Err(IoError::malformed(path, lineno, "expected header label,seed,s0,..."));
            }
            width = Some(fields.len());
            continue;
        }
        let width = width.unwrap();
        if fields.len() != width {
            return Err(IoError::malformed(
                path,
                lineno,
                format!("expected {} fields, found {}", width, fields.len()),
            ));
        }
        let label: EventClass = fields[0]
            .parse()
            .map_err(|_| IoError::malformed(path, lineno, format!("unknown class {:?}", fields[0])))?;
        let seed: u64 = fields[1]
            .parse()
            .map_err(|_| IoError::malformed(path, lineno, format!("bad seed {:?}", fields[1])))?;
        let samples = fields[2..]
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<Result<Vec<f64>, _>>()
            .map_err(|e| IoError::malformed(path, lineno, format!("bad sample: {e}")))?;
        rows.push(SignalRow { label, seed, samples });
    }
    if width.is_none() {
        return Err(IoError::malformed(path, 1, "empty dataset file"));
    }
    Ok(rows)
}

/// Sidecar entry: the class and the sampled event parameters of one signal.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ParamsEntry {
    pub label: EventClass,
    pub params: EventParams,
}

/// Writes the parameter sidecar JSON: an object keyed by signal seed.
pub fn write_params_json(path: &Path, signals: &[Signal]) -> Result<(), IoError> {
    let map: std::collections::BTreeMap<u64, ParamsEntry> = signals
        .iter()
        .map(|s| (s.seed, ParamsEntry { label: s.label, params: s.params.clone() }))
        .collect();
    write_json_pretty(path, &map)
}

/// Reads a parameter sidecar written by [`write_params_json`].
pub fn read_params_json(
    path: &Path,
) -> Result<std::collections::BTreeMap<u64, ParamsEntry>, IoError> {
    load_json(path)
}

// ---------------------------------------------------------------------------
// Feature CSV
// ---------------------------------------------------------------------------

/// Comment line documenting the feature-column ordering.
pub const FEATURE_CSV_COMMENT: &str =
    "# f(6(i-1)+j) = level i, stat j; stats: EDR,STD,MEAN,KRT,SKW,ENTP";

/// Writes feature vectors as CSV with header `label,f1,...,f66` behind the
/// ordering comment line.
pub fn write_features_csv(path: &Path, features: &[FeatureVector]) -> Result<(), IoError> {
    let mut out = String::from(FEATURE_CSV_COMMENT);
    out.push('\n');
    out.push_str("label");
    for k in 1..=N_FEATURES {
        let _ = write!(out, ",f{k}");
    }
    out.push('\n');
    for f in features {
        let _ = write!(out, "{}", f.label);
        for v in &f.values {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    atomic_write(path, out.as_bytes())
}

/// Reads a feature CSV produced by [`write_features_csv`]. Comment lines are
/// skipped; each row must carry exactly [`N_FEATURES`] values.
pub fn read_features_csv(path: &Path) -> Result<Vec<FeatureVector>, IoError> {
    let text = read_to_string(path)?;
    let mut rows = Vec::new();
    let mut saw_header = false;
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if line.starts_with('#') || line.is_empty() {
            continue;
        }
        if !saw_header {
            if !line.starts_with("label,f1,") {
                return Err(IoError::malformed(path, lineno, "expected header label,f1,..."));
            }
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != N_FEATURES + 1 {
            return Err(IoError::malformed(
                path,
                lineno,
                format!("expected {} fields, found {}", N_FEATURES + 1, fields.len()),
            ));
        }
        let label: EventClass = fields[0]
            .parse()
            .map_err(|_| IoError::malformed(path, lineno, format!("unknown class {:?}", fields[0])))?;
        let values = fields[1..]
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<Result<Vec<f64>, _>>()
            .map_err(|e| IoError::malformed(path, lineno, format!("bad value: {e}")))?;
        rows.push(FeatureVector { label, values });
    }
    if !saw_header {
        return Err(IoError::malformed(path, 1, "empty feature file"));
    }
    Ok(rows)
}

// ---------------------------------------------------------------------------
// Decomposition dump
// ---------------------------------------------------------------------------

/// Writes a decomposition as JSON mapping `D1`..`D{levels}` to detail
/// coefficients and `A{levels}` to the final approximation.
pub fn write_decomposition_json(
    path: &Path,
    decomp: &WaveletDecomposition,
) -> Result<(), IoError> {
    let mut map = serde_json::Map::new();
    for (i, d) in decomp.details.iter().enumerate() {
        map.insert(format!("D{}", i + 1), serde_json::json!(d));
    }
    map.insert(format!("A{}", decomp.levels()), serde_json::json!(decomp.approx));
    write_json_pretty(path, &serde_json::Value::Object(map))
}

// ---------------------------------------------------------------------------
// Model / spec / report JSON
// ---------------------------------------------------------------------------

/// Saves a model to pretty-printed JSON (atomic).
pub fn save_model(path: &Path, model: &OselmModel) -> Result<(), IoError> {
    write_json_pretty(path, model)
}

/// Loads a model saved by [`save_model`], revalidating all shape and range
/// invariants.
pub fn load_model(path: &Path) -> Result<OselmModel, IoError> {
    load_json(path)
}

/// Loads a dataset description (preset name or explicit counts plus master
/// seed) from JSON.
pub fn read_dataset_spec(path: &Path) -> Result<DatasetSpec, IoError> {
    load_json(path)
}

/// Loads a full experiment description from JSON.
pub fn read_experiment_spec(path: &Path) -> Result<ExperimentSpec, IoError> {
    load_json(path)
}

/// The full evaluation output of an experiment: the spec that produced it,
/// one report per (activation, hidden-count, seed) cell, and per-cell mean
/// summaries.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportFile {
    pub spec: ExperimentSpec,
    pub reports: Vec<EvalReport>,
    pub summaries: Vec<ActivationSummary>,
}

/// Writes the experiment report JSON (atomic).
pub fn write_report_json(path: &Path, report: &ReportFile) -> Result<(), IoError> {
    write_json_pretty(path, report)
}

/// Reads a report written by [`write_report_json`].
pub fn read_report_json(path: &Path) -> Result<ReportFile, IoError> {
    load_json(path)
}

// ---------------------------------------------------------------------------
// Confusion matrix CSV
// ---------------------------------------------------------------------------

/// Writes one report's confusion matrix as CSV: rows are true classes,
/// columns predicted classes.
pub fn write_confusion_csv(path: &Path, report: &EvalReport) -> Result<(), IoError> {
    let mut out = String::from("true_class");
    for c in &report.classes {
        let _ = write!(out, ",{c}");
    }
    out.push('\n');
    for (c, row) in report.classes.iter().zip(&report.confusion) {
        let _ = write!(out, "{c}");
        for v in row {
            let _ = write!(out, ",{v}");
        }
        out.push('\n');
    }
    atomic_write(path, out.as_bytes())
}

// ---------------------------------------------------------------------------
// Comparison tables
// ---------------------------------------------------------------------------

/// Dataset-sizing table row: per-preset class and sample counts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SizingRow {
    pub preset: String,
    pub n_classes: usize,
    pub n_train: usize,
    pub n_test: usize,
}

/// Writes the dataset-sizing table CSV.
pub fn write_sizing_csv(path: &Path, rows: &[SizingRow]) -> Result<(), IoError> {
    let mut out = String::from("preset,n_classes,n_train,n_test\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{}", r.preset, r.n_classes, r.n_train, r.n_test);
    }
    atomic_write(path, out.as_bytes())
}

/// Reference numbers for one activation-comparison row (times in seconds,
/// accuracies in percent).
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ComparisonRef {
    pub train_time_s: f64,
    pub test_time_s: f64,
    pub train_accuracy_pct: f64,
    pub test_accuracy_pct: f64,
}

/// One row of the activation-comparison table: measured values plus
/// optional published reference values side by side.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub class_set: String,
    pub activation: ActivationKind,
    pub hidden_count: usize,
    pub train_time_s: f64,
    pub test_time_s: f64,
    pub train_accuracy_pct: f64,
    pub test_accuracy_pct: f64,
    pub reference: Option<ComparisonRef>,
}

impl ComparisonRow {
    /// Builds a measured row from a summary, tagging it with its class set.
    pub fn from_summary(class_set: &str, s: &ActivationSummary) -> Self {
        ComparisonRow {
            class_set: class_set.to_owned(),
            activation: s.activation,
            hidden_count: s.hidden_count,
            train_time_s: s.mean_train_time_s,
            test_time_s: s.mean_test_time_s,
            train_accuracy_pct: 100.0 * s.mean_train_accuracy,
            test_accuracy_pct: 100.0 * s.mean_test_accuracy,
            reference: None,
        }
    }
}

/// Writes the activation-comparison CSV. Timing columns are inherently
/// non-deterministic; all other columns are byte-stable for fixed inputs.
pub fn write_comparison_csv(path: &Path, rows: &[ComparisonRow]) -> Result<(), IoError> {
    let mut out = String::from(
        "class_set,activation,hidden_count,train_time_s,test_time_s,\
         train_accuracy_pct,test_accuracy_pct,\
         ref_train_time_s,ref_test_time_s,ref_train_accuracy_pct,ref_test_accuracy_pct\n",
    );
    for r in rows {
        let _ = write!(
            out,
            "{},{},{},{},{},{},{}",
            r.class_set,
            r.activation,
            r.hidden_count,
            r.train_time_s,
            r.test_time_s,
            r.train_accuracy_pct,
            r.test_accuracy_pct
        );
        match &r.reference {
            Some(p) => {
                let _ = writeln!(
                    out,
                    ",{},{},{},{}",
                    p.train_time_s, p.test_time_s, p.train_accuracy_pct, p.test_accuracy_pct
                );
            }
            None => out.push_str(",,,,\n"),
        }
    }
    atomic_write(path, out.as_bytes())
}

/// One row of the hidden-node sweep table: measured values plus optional
/// published reference values.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepCsvRow {
    pub sl_no: usize,
    pub hidden_count: usize,
    pub test_accuracy_pct: f64,
    pub train_time_s: f64,
    pub ref_test_accuracy_pct: Option<f64>,
    pub ref_train_time_s: Option<f64>,
}

impl SweepCsvRow {
    /// Builds a measured row from a sweep result.
    pub fn from_sweep(sl_no: usize, r: &SweepRow) -> Self {
        SweepCsvRow {
            sl_no,
            hidden_count: r.hidden_count,
            test_accuracy_pct: 100.0 * r.mean_test_accuracy,
            train_time_s: r.mean_train_time_s,
            ref_test_accuracy_pct: None,
            ref_train_time_s: None,
        }
    }
}

/// Writes the hidden-node sweep CSV. The training-time column is inherently
/// non-deterministic; all other columns are byte-stable for fixed inputs.
pub fn write_sweep_csv(path: &Path, rows: &[SweepCsvRow]) -> Result<(), IoError> {
    let mut out = String::from(
        "sl_no,hidden_count,test_accuracy_pct,train_time_s,\
         ref_test_accuracy_pct,ref_train_time_s\n",
    );
    for r in rows {
        let _ = write!(
            out,
            "{},{},{},{}",
            r.sl_no, r.hidden_count, r.test_accuracy_pct, r.train_time_s
        );
        match (r.ref_test_accuracy_pct, r.ref_train_time_s) {
            (Some(a), Some(t)) => {
                let _ = writeln!(out, ",{a},{t}");
            }
            (Some(a), None) => {
                let _ = writeln!(out, ",{a},");
            }
            (None, Some(t)) => {
                let _ = writeln!(out, ",,{t}");
            }
            (None, None) => out.push_str(",,\n"),
        }
    }
    atomic_write(path, out.as_bytes())
}

// ---------------------------------------------------------------------------
