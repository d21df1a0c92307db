//! Experiment orchestration: dataset synthesis, the decompose→extract front
//! half of the pipeline, seeded training/evaluation cells with timing, and
//! the two standard studies (activation comparison and hidden-neuron sweep).
//!
//! Every quantity except wall-clock timings is a pure function of the
//! experiment spec, so identical specs reproduce identical reports
//! bit-for-bit. Randomness is split into disjoint derived streams: dataset
//! signals, training-order shuffles, and hidden-layer draws never share a
//! generator.

use std::time::Instant;

use ndarray::Array2;
use rand::seq::SliceRandom;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dwt::{self, DwtError};
use crate::features::{self, FeatureError, FeatureVector};
use crate::oselm::{one_hot, ActivationKind, OselmError, OselmModel};
use crate::seed;
use crate::siggen::{self, DatasetSpec, EventClass, SiggenError, Signal};

/// Default chunk size for sequential updates.
pub const DEFAULT_CHUNK: usize = 50;

/// Default number of random repetitions per experiment cell.
pub const DEFAULT_SEEDS: u64 = 5;

/// Default hidden-node count for a class-set size: 700 for the 16-class
/// problem, 500 otherwise.
pub fn default_hidden_count(n_classes: usize) -> usize {
    if n_classes >= 16 {
        700
    } else {
        500
    }
}

/// Errors from experiment validation and the pipeline stages it drives.
#[derive(Debug, Error)]
pub enum HarnessError {
    /// The experiment spec fails a structural requirement (empty lists,
    /// zero counts, unsorted sweep values, ...).
    #[error("invalid experiment spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Siggen(#[from] SiggenError),
    #[error(transparent)]
    Dwt(#[from] DwtError),
    #[error(transparent)]
    Feature(#[from] FeatureError),
    #[error(transparent)]
    Oselm(#[from] OselmError),
}

/// A complete experiment description: what data to synthesize and which
/// (activation, hidden-count, seed) cells to train on it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentSpec {
    /// Dataset source: preset name or explicit per-class counts, plus the
    /// master seed every random stream derives from.
    pub dataset: DatasetSpec,
    /// Activation kinds to evaluate.
    pub activations: Vec<ActivationKind>,
    /// Hidden-node counts (L) to evaluate.
    pub hidden_counts: Vec<usize>,
    /// Rows per sequential update after initialization.
    #[serde(default = "default_chunk")]
    pub chunk_size: usize,
    /// Independent repetitions; each gets its own dataset, shuffle, and
    /// hidden layer.
    #[serde(default = "default_seeds")]
    pub n_seeds: u64,
}

fn default_chunk() -> usize {
    DEFAULT_CHUNK
}

fn default_seeds() -> u64 {
    DEFAULT_SEEDS
}

impl ExperimentSpec {
    /// Standard single-activation experiment on a named preset, with the
    /// preset's default hidden count.
    pub fn preset(name: &str, master_seed: u64) -> Result<ExperimentSpec, HarnessError> {
        let p = siggen::preset(name)?;
        Ok(ExperimentSpec {
            dataset: DatasetSpec::from_preset(name, master_seed)?,
            activations: vec![ActivationKind::Sigmoid],
            hidden_counts: vec![default_hidden_count(p.n_classes)],
            chunk_size: DEFAULT_CHUNK,
            n_seeds: DEFAULT_SEEDS,
        })
    }

    /// Standard single-activation experiment on explicit per-class counts,
    /// with the hidden count defaulted for the class-set size.
    pub fn from_counts(
        counts: std::collections::BTreeMap<EventClass, usize>,
        master_seed: u64,
    ) -> ExperimentSpec {
        let n_classes = counts.len();
        ExperimentSpec {
            dataset: DatasetSpec::from_counts(counts, master_seed),
            activations: vec![ActivationKind::Sigmoid],
            hidden_counts: vec![default_hidden_count(n_classes)],
            chunk_size: DEFAULT_CHUNK,
            n_seeds: DEFAULT_SEEDS,
        }
    }

    /// Structural validation; every entry point calls this first.
    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.activations.is_empty() {
            return Err(HarnessError::InvalidSpec("activation list is empty".into()));
        }
        if self.hidden_counts.is_empty() {
            return Err(HarnessError::InvalidSpec("hidden-count list is empty".into()));
        }
        if self.hidden_counts.iter().any(|&l| l == 0) {
            return Err(HarnessError::InvalidSpec("hidden counts must be positive".into()));
        }
        if self.chunk_size == 0 {
            return Err(HarnessError::InvalidSpec("chunk size must be positive".into()));
        }
        if self.n_seeds == 0 {
            return Err(HarnessError::InvalidSpec("n_seeds must be at least 1".into()));
        }
        if let Some(name) = &self.dataset.preset {
            siggen::preset(name)?; // unknown names fail here
        } else {
            if self.dataset.counts.is_empty() {
                return Err(HarnessError::InvalidSpec(
                    "dataset needs a preset or explicit counts".into(),
                ));
            }
            if self.dataset.counts.values().any(|&c| c == 0) {
                return Err(HarnessError::InvalidSpec("per-class counts must be positive".into()));
            }
        }
        Ok(())
    }
}

/// Everything measured on one trained cell. Confusion rows are true
/// classes, columns predicted classes, both in `classes` order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EvalReport {
    /// Preset name when the dataset came from one.
    pub preset: Option<String>,
    /// Class vocabulary (output-column order).
    pub classes: Vec<EventClass>,
    pub activation: ActivationKind,
    pub hidden_count: usize,
    pub chunk_size: usize,
    pub n_train: usize,
    pub n_test: usize,
    /// Repetition index within the experiment.
    pub seed_index: u64,
    /// Seed the dataset's signals derive from.
    pub dataset_seed: u64,
    /// Seed the hidden layer derives from.
    pub model_seed: u64,
    /// Seed of the training-order shuffle.
    pub shuffle_seed: u64,
    /// Ridge coefficient when initialization needed regularization.
    pub ridge_lambda: Option<f64>,
    pub confusion: Vec<Vec<u64>>,
    pub per_class_accuracy: Vec<f64>,
    /// Fraction of training samples the final model classifies correctly.
    pub train_accuracy: f64,
    /// Fraction of test samples classified correctly: trace(confusion) over
    /// its total.
    pub overall_accuracy: f64,
    pub train_time_s: f64,
    pub test_time_s: f64,
}

/// Mean outcomes for one activation at one hidden count.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ActivationSummary {
    pub activation: ActivationKind,
    pub hidden_count: usize,
    pub n_seeds: u64,
    pub mean_train_accuracy: f64,
    pub mean_test_accuracy: f64,
    pub mean_train_time_s: f64,
    pub mean_test_time_s: f64,
}

/// Mean outcomes for one hidden count in a sweep.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub hidden_count: usize,
    pub n_seeds: u64,
    pub mean_train_accuracy: f64,
    pub mean_test_accuracy: f64,
    pub mean_train_time_s: f64,
    pub mean_test_time_s: f64,
}

/// Decomposes and extracts features for every signal (in parallel; output
/// order matches input order).
pub fn extract_features(signals: &[Signal]) -> Result<Vec<FeatureVector>, HarnessError> {
    signals
        .par_iter()
        .map(|s| {
            let decomp = dwt::decompose(&s.samples, features::N_LEVELS)?;
            Ok(features::extract(&decomp, s.label)?)
        })
        .collect()
}

/// Synthesizes the train/test signal streams for one repetition.
///
/// Presets use their fixed totals. Explicit-count specs treat the counts as
/// training counts and synthesize a matched test stream a quarter of each
/// class's size (the same 80/20 proportion as the presets), at least one
/// signal per class.
pub fn synthesize_split(
    dataset: &DatasetSpec,
    dataset_seed: u64,
) -> Result<(Vec<Signal>, Vec<Signal>, Vec<EventClass>), HarnessError> {
    if let Some(name) = &dataset.preset {
        let p = siggen::preset(name)?;
        let classes = EventClass::disturbance_set(p.n_classes);
        let train_counts = siggen::spread_counts(p.train_total, p.n_classes);
        let test_counts = siggen::spread_counts(p.test_total, p.n_classes);
        let train =
            siggen::generate_stream(classes, &train_counts, dataset_seed, seed::STREAM_TRAIN, &dataset.signal);
        let test =
            siggen::generate_stream(classes, &test_counts, dataset_seed, seed::STREAM_TEST, &dataset.signal);
        Ok((train, test, classes.to_vec()))
    } else {
        let classes: Vec<EventClass> = dataset.counts.keys().copied().collect();
        let train_counts: Vec<usize> = dataset.counts.values().copied().collect();
        let test_counts: Vec<usize> = train_counts.iter().map(|&c| ((c + 2) / 4).max(1)).collect();
        let train =
            siggen::generate_stream(&classes, &train_counts, dataset_seed, seed::STREAM_TRAIN, &dataset.signal);
        let test =
            siggen::generate_stream(&classes, &test_counts, dataset_seed, seed::STREAM_TEST, &dataset.signal);
        Ok((train, test, classes))
    }
}

fn feature_matrix(rows: &[&FeatureVector]) -> Array2<f64> {
    let width = rows.first().map_or(0, |f| f.values.len());
    let mut m = Array2::zeros((rows.len(), width));
    for (i, f) in rows.iter().enumerate() {
        assert_eq!(f.values.len(), width, "all feature vectors must share one width");
        for (j, &v) in f.values.iter().enumerate() {
            m[[i, j]] = v;
        }
    }
    m
}

/// Trains one model on `train` and evaluates it on `test`.
///
/// The training stream is shuffled with `shuffle_seed`, the first
/// N₀ = max(hidden_count, chunk_size) rows (capped at the stream length)
/// initialize the model, and the remainder streams in `chunk_size` rows at
/// a time. Train time covers initialization and updates; test time covers
/// classifying `test`. The returned report carries no experiment context
/// (preset, seed index, dataset seed) — [`run_experiment`] fills those.
#[allow(clippy::too_many_arguments)]
pub fn train_and_eval(
    train: &[FeatureVector],
    test: &[FeatureVector],
    classes: &[EventClass],
    activation: ActivationKind,
    hidden_count: usize,
    chunk_size: usize,
    model_seed: u64,
    shuffle_seed: u64,
) -> Result<(OselmModel, EvalReport), HarnessError> {
    if chunk_size == 0 {
        return Err(HarnessError::InvalidSpec("chunk size must be positive".into()));
    }
    if hidden_count == 0 {
        return Err(HarnessError::InvalidSpec("hidden count must be positive".into()));
    }
    if train.is_empty() || test.is_empty() {
        return Err(HarnessError::InvalidSpec("train and test sets must be non-empty".into()));
    }

    let mut order: Vec<&FeatureVector> = train.iter().collect();
    order.shuffle(&mut seed::rng(shuffle_seed, &[seed::STREAM_SHUFFLE]));

    let x = feature_matrix(&order);
    let labels: Vec<EventClass> = order.iter().map(|f| f.label).collect();
    let t = one_hot(&labels, classes);

    let n0 = hidden_count.max(chunk_size).min(train.len());

    let train_started = Instant::now();
    let mut model = OselmModel::init_phase(
        x.slice(ndarray::s![..n0, ..]),
        t.slice(ndarray::s![..n0, ..]),
        classes,
        hidden_count,
        activation,
        model_seed,
    )?;
    let mut at = n0;
    while at < train.len() {
        let hi = (at + chunk_size).min(train.len());
        model.sequential_update(x.slice(ndarray::s![at..hi, ..]), t.slice(ndarray::s![at..hi, ..]))?;
        at = hi;
    }
    let train_time_s = train_started.elapsed().as_secs_f64();

    // Held-out evaluation (timed, matching the train/test timing split).
    let test_rows: Vec<&FeatureVector> = test.iter().collect();
    let test_x = feature_matrix(&test_rows);
    let test_started = Instant::now();
    let (_, predicted) = model.predict_batch(test_x.view());
    let test_time_s = test_started.elapsed().as_secs_f64();

    let m = classes.len();
    let class_index = |c: EventClass| {
        classes
            .iter()
            .position(|k| *k == c)
            .expect("every label is in the class vocabulary")
    };
    let mut confusion = vec![vec![0u64; m]; m];
    for (f, p) in test.iter().zip(&predicted) {
        confusion[class_index(f.label)][class_index(*p)] += 1;
    }
    let per_class_accuracy: Vec<f64> = confusion
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let total: u64 = row.iter().sum();
            if total == 0 {
                // No test samples of this class: vacuously correct.
                1.0
            } else {
                confusion[i][i] as f64 / total as f64
            }
        })
        .collect();
    let correct: u64 = (0..m).map(|i| confusion[i][i]).sum();
    let total: u64 = confusion.iter().flatten().sum();
    let overall_accuracy = correct as f64 / total as f64;

    // Training accuracy of the final model (untimed diagnostics).
    let (_, train_predicted) = model.predict_batch(x.view());
    let train_correct = labels.iter().zip(&train_predicted).filter(|(a, b)| a == b).count();
    let train_accuracy = train_correct as f64 / train.len() as f64;

    let report = EvalReport {
        preset: None,
        classes: classes.to_vec(),
        activation,
        hidden_count,
        chunk_size,
        n_train: train.len(),
        n_test: test.len(),
        seed_index: 0,
        dataset_seed: 0,
        model_seed,
        shuffle_seed,
        ridge_lambda: model.ridge_lambda(),
        confusion,
        per_class_accuracy,
        train_accuracy,
        overall_accuracy,
        train_time_s,
        test_time_s,
    };
    Ok((model, report))
}

/// Runs every (activation, hidden-count, seed) cell of the experiment.
///
/// Each repetition synthesizes its own dataset (signal seeds derive from the
/// master seed and the repetition index) and reuses the extracted features
/// across all cells of that repetition. Cells execute sequentially so their
/// timings do not contend for hardware. Reports are ordered by activation,
/// then hidden count, then repetition.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<EvalReport>, HarnessError> {
    spec.validate()?;
    let master = spec.dataset.master_seed;
    let mut reports = Vec::new();
    for s in 0..spec.n_seeds {
        let dataset_seed = seed::derive(master, &[seed::STREAM_RUN, s]);
        let (train_sigs, test_sigs, classes) = synthesize_split(&spec.dataset, dataset_seed)?;
        let train = extract_features(&train_sigs)?;
        drop(train_sigs);
        let test = extract_features(&test_sigs)?;
        drop(test_sigs);
        let shuffle_seed = seed::derive(master, &[seed::STREAM_SHUFFLE, s]);
        for (ai, &activation) in spec.activations.iter().enumerate() {
            for &l in &spec.hidden_counts {
                let model_seed = seed::derive(master, &[seed::STREAM_MODEL, s, ai as u64, l as u64]);
                let (_, mut report) = train_and_eval(
                    &train,
                    &test,
                    &classes,
                    activation,
                    l,
                    spec.chunk_size,
                    model_seed,
                    shuffle_seed,
                )?;
                report.preset = spec.dataset.preset.clone();
                report.seed_index = s;
                report.dataset_seed = dataset_seed;
                reports.push(report);
            }
        }
    }
    let activation_rank = |a: ActivationKind| {
        spec.activations.iter().position(|k| *k == a).unwrap_or(usize::MAX)
    };
    reports.sort_by_key(|r| (activation_rank(r.activation), r.hidden_count, r.seed_index));
    Ok(reports)
}

fn mean<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0;
    let mut count = 0u64;
    for v in values {
        sum += v;
        count += 1;
    }
    sum / count as f64
}

/// Aggregates one experiment into per-(activation, hidden-count) means.
pub fn compare_activations(spec: &ExperimentSpec) -> Result<Vec<ActivationSummary>, HarnessError> {
    let reports = run_experiment(spec)?;
    Ok(summarize_reports(spec, &reports))
}

/// Aggregates an experiment's per-seed reports into per-(activation,
/// hidden-count) mean summaries, in the spec's cell order.
pub fn summarize_reports(spec: &ExperimentSpec, reports: &[EvalReport]) -> Vec<ActivationSummary> {
    let mut summaries = Vec::new();
    for &activation in &spec.activations {
        for &l in &spec.hidden_counts {
            let cell: Vec<&EvalReport> = reports
                .iter()
                .filter(|r| r.activation == activation && r.hidden_count == l)
                .collect();
            summaries.push(ActivationSummary {
                activation,
                hidden_count: l,
                n_seeds: cell.len() as u64,
                mean_train_accuracy: mean(cell.iter().map(|r| r.train_accuracy)),
                mean_test_accuracy: mean(cell.iter().map(|r| r.overall_accuracy)),
                mean_train_time_s: mean(cell.iter().map(|r| r.train_time_s)),
                mean_test_time_s: mean(cell.iter().map(|r| r.test_time_s)),
            });
        }
    }
    summaries
}

/// Sweeps hidden-node counts (ascending) for a single-activation spec and
/// reports per-count means.
pub fn neuron_sweep(spec: &ExperimentSpec, l_values: &[usize]) -> Result<Vec<SweepRow>, HarnessError> {
    if l_values.is_empty() {
        return Err(HarnessError::InvalidSpec("sweep needs at least one hidden count".into()));
    }
    if l_values.windows(2).any(|w| w[0] >= w[1]) {
        return Err(HarnessError::InvalidSpec(
            "sweep hidden counts must be strictly ascending".into(),
        ));
    }
    if spec.activations.len() != 1 {
        return Err(HarnessError::InvalidSpec(
            "a sweep uses exactly one activation".into(),
        ));
    }
    let mut sweep_spec = spec.clone();
    sweep_spec.hidden_counts = l_values.to_vec();
    let reports = run_experiment(&sweep_spec)?;
    let rows = l_values
        .iter()
        .map(|&l| {
            let cell: Vec<&EvalReport> = reports.iter().filter(|r| r.hidden_count == l).collect();
            SweepRow {
                hidden_count: l,
                n_seeds: cell.len() as u64,
                mean_train_accuracy: mean(cell.iter().map(|r| r.train_accuracy)),
                mean_test_accuracy: mean(cell.iter().map(|r| r.overall_accuracy)),
                mean_train_time_s: mean(cell.iter().map(|r| r.train_time_s)),
                mean_test_time_s: mean(cell.iter().map(|r| r.test_time_s)),
            }
        })
        .collect();
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeMap;
    use crate::siggen::SignalSpec;

    /// Small synthetic dataset spec: `per_class` training signals for the
    /// first `n` disturbance classes.
    fn small_dataset(n: usize, per_class: usize, master_seed: u64) -> DatasetSpec {
        let counts: BTreeMap<EventClass, usize> = EventClass::disturbance_set(n)
            .iter()
            .map(|&c| (c, per_class))
            .collect();
        DatasetSpec::from_counts(counts, master_seed)
    }

    fn small_spec(master_seed: u64) -> ExperimentSpec {
        ExperimentSpec {
            dataset: small_dataset(4, 30, master_seed),
            activations: vec![ActivationKind::Sigmoid],
            hidden_counts: vec![20],
            chunk_size: 10,
            n_seeds: 2,
        }
    }

    fn strip_times(reports: &[EvalReport]) -> Vec<serde_json::Value> {
        reports
            .iter()
            .map(|r| {
                let mut v = serde_json::to_value(r).unwrap();
                let o = v.as_object_mut().unwrap();
                o.remove("train_time_s");
                o.remove("test_time_s");
                v
            })
            .collect()
    }

    #[test]
    fn memorizing_model_scores_perfectly_on_its_training_set() {
        // Interpolation regime: N₀ = L = the whole training set, evaluated
        // on itself.
        let dataset = small_dataset(3, 12, 5);
        let (train_sigs, _, classes) = synthesize_split(&dataset, 99).unwrap();
        let train = extract_features(&train_sigs).unwrap();
        let (_, report) = train_and_eval(
            &train,
            &train,
            &classes,
            ActivationKind::Sigmoid,
            train.len(),
            50,
            1,
            2,
        )
        .unwrap();
        assert_eq!(report.overall_accuracy, 1.0);
        assert_eq!(report.train_accuracy, 1.0);
        assert_eq!(report.n_train, 36);
        assert_eq!(report.n_test, 36);
    }

    #[test]
    fn confusion_rows_sum_to_test_counts() {
        let reports = run_experiment(&small_spec(7)).unwrap();
        assert_eq!(reports.len(), 2); // one cell x two seeds
        for report in &reports {
            // 30 training signals per class → 8 test signals per class.
            for row in &report.confusion {
                assert_eq!(row.iter().sum::<u64>(), 8);
            }
            let trace: u64 = (0..4).map(|i| report.confusion[i][i]).sum();
            let total: u64 = report.confusion.iter().flatten().sum();
            assert_eq!(report.overall_accuracy, trace as f64 / total as f64);
            assert!((0.0..=1.0).contains(&report.overall_accuracy));
            assert!((0.0..=1.0).contains(&report.train_accuracy));
            for (i, &acc) in report.per_class_accuracy.iter().enumerate() {
                let row_sum: u64 = report.confusion[i].iter().sum();
                assert_eq!(acc, report.confusion[i][i] as f64 / row_sum as f64);
            }
        }
    }

    #[test]
    fn identical_specs_reproduce_identical_reports() {
        let a = run_experiment(&small_spec(11)).unwrap();
        let b = run_experiment(&small_spec(11)).unwrap();
        assert_eq!(strip_times(&a), strip_times(&b));

        // A different master seed must actually change the outcome.
        let c = run_experiment(&small_spec(12)).unwrap();
        assert_ne!(strip_times(&a), strip_times(&c));
    }

    #[test]
    fn preset_split_matches_published_totals() {
        let dataset = DatasetSpec::from_preset("11class", 3).unwrap();
        let (train, test, classes) = synthesize_split(&dataset, 42).unwrap();
        assert_eq!(classes.len(), 11);
        assert_eq!(train.len(), 3254);
        assert_eq!(test.len(), 815);
        // Remainders go to the lowest class indices: 3254 = 9×296 + 2×295.
        let count_label = |signals: &[Signal], c: EventClass| {
            signals.iter().filter(|s| s.label == c).count()
        };
        assert_eq!(count_label(&train, EventClass::Sag), 296);
        assert_eq!(count_label(&train, EventClass::SwellInterruption), 295);
        assert_eq!(count_label(&test, EventClass::Sag), 75);
        assert_eq!(count_label(&test, EventClass::Swell), 74);
    }

    #[test]
    fn sweep_single_value_agrees_with_run_experiment() {
        let spec = small_spec(13);
        let rows = neuron_sweep(&spec, &[20]).unwrap();
        assert_eq!(rows.len(), 1);
        let reports = run_experiment(&spec).unwrap();
        let expected = mean(reports.iter().map(|r| r.overall_accuracy));
        assert_eq!(rows[0].mean_test_accuracy, expected);
        assert_eq!(rows[0].n_seeds, 2);
    }

    #[test]
    fn compare_single_activation_agrees_with_run_experiment() {
        let spec = small_spec(17);
        let summaries = compare_activations(&spec).unwrap();
        assert_eq!(summaries.len(), 1);
        let reports = run_experiment(&spec).unwrap();
        assert_eq!(
            summaries[0].mean_test_accuracy,
            mean(reports.iter().map(|r| r.overall_accuracy))
        );
        assert_eq!(summaries[0].activation, ActivationKind::Sigmoid);
    }

    #[test]
    fn structural_validation_rejects_bad_specs() {
        let mut spec = small_spec(1);
        spec.activations.clear();
        assert!(matches!(run_experiment(&spec), Err(HarnessError::InvalidSpec(_))));

        let mut spec = small_spec(1);
        spec.chunk_size = 0;
        assert!(matches!(run_experiment(&spec), Err(HarnessError::InvalidSpec(_))));

        let mut spec = small_spec(1);
        spec.n_seeds = 0;
        assert!(matches!(run_experiment(&spec), Err(HarnessError::InvalidSpec(_))));

        let mut spec = small_spec(1);
        spec.hidden_counts = vec![0];
        assert!(matches!(run_experiment(&spec), Err(HarnessError::InvalidSpec(_))));

        let mut spec = small_spec(1);
        spec.dataset.counts.insert(EventClass::Sag, 0);
        assert!(matches!(run_experiment(&spec), Err(HarnessError::InvalidSpec(_))));

        let mut spec = small_spec(1);
        spec.dataset.preset = Some("12class".into());
        assert!(matches!(run_experiment(&spec), Err(HarnessError::Siggen(_))));

        assert!(matches!(
            neuron_sweep(&small_spec(1), &[50, 50]),
            Err(HarnessError::InvalidSpec(_))
        ));
        assert!(matches!(
            neuron_sweep(&small_spec(1), &[100, 50]),
            Err(HarnessError::InvalidSpec(_))
        ));
        let mut spec = small_spec(1);
        spec.activations = vec![ActivationKind::Sigmoid, ActivationKind::Rbf];
        assert!(matches!(
            neuron_sweep(&spec, &[10, 20]),
            Err(HarnessError::InvalidSpec(_))
        ));
    }

    #[test]
    fn experiment_fails_fast_when_training_set_is_smaller_than_l() {
        let mut spec = small_spec(1);
        spec.hidden_counts = vec![500]; // 120 training rows < 500 hidden nodes
        assert!(matches!(
            run_experiment(&spec),
            Err(HarnessError::Oselm(OselmError::InsufficientInitData { .. }))
        ));
    }

    #[test]
    fn spec_serde_round_trip() {
        let spec = small_spec(23);
        let json = serde_json::to_string_pretty(&spec).unwrap();
        let back: ExperimentSpec = serde_json::from_str(&json).unwrap();
        let again = serde_json::to_string_pretty(&back).unwrap();
        assert_eq!(json, again);

        // Defaults fill in when omitted.
        let minimal = r#"{
            "dataset": {"preset": "13class", "master_seed": 9},
            "activations": ["sigmoid"],
            "hidden_counts": [500]
        }"#;
        let spec: ExperimentSpec = serde_json::from_str(minimal).unwrap();
        assert_eq!(spec.chunk_size, DEFAULT_CHUNK);
        assert_eq!(spec.n_seeds, DEFAULT_SEEDS);
        assert_eq!(spec.dataset.signal, SignalSpec::default());
    }
}
