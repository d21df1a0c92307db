//! `pqd` — command-line front end for the power-quality disturbance toolkit.
//!
//! Subcommands cover the full pipeline: `generate` synthetic datasets,
//! `decompose` a stored signal into wavelet levels, `extract` features,
//! `train` and `eval` classifiers, run `sweep` / `compare` experiments, and
//! `reproduce` the built-in reference tables with side-by-side columns.
//!
//! Every command is deterministic for fixed flags (timing columns excepted):
//! all randomness flows from the `--seed` flag through documented per-signal
//! and per-model derivations. Output files are written atomically. The
//! `PQ_OSELM_THREADS` environment variable caps worker threads.

mod reference;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use pqd_core::features::{extract, N_LEVELS};
use pqd_core::harness::{
    self, neuron_sweep, run_experiment, summarize_reports, ExperimentSpec,
};
use pqd_core::io::{self, ComparisonRef, ComparisonRow, SignalRow, SizingRow, SweepCsvRow};
use pqd_core::oselm::{one_hot, ActivationKind, OselmModel};
use pqd_core::siggen::{DatasetSpec, EventClass};
use pqd_core::{dwt, seed, FeatureVector, Signal};

#[derive(Parser)]
#[command(
    name = "pqd",
    about = "Power-quality disturbance toolkit: synthesis, wavelet features, online-sequential classification",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn parse_class(s: &str) -> Result<EventClass, String> {
    s.parse().map_err(|_| format!("unknown class '{s}'"))
}

fn parse_activation(s: &str) -> Result<ActivationKind, String> {
    s.parse().map_err(|_| format!("unknown activation '{s}' (expected sigmoid, rbf, sinusoid, or hardlim)"))
}

#[derive(Subcommand)]
enum Command {
    /// Generate a labeled synthetic dataset (CSV + parameter sidecar JSON).
    Generate {
        /// Classes to synthesize, e.g. S1,S2,S5.
        #[arg(long, value_delimiter = ',', value_parser = parse_class, conflicts_with = "preset")]
        classes: Vec<EventClass>,
        /// Signals per class (with --classes).
        #[arg(long, default_value_t = 10)]
        per_class: usize,
        /// Named preset (11class, 13class, 16class) instead of --classes.
        #[arg(long)]
        preset: Option<String>,
        /// Master seed; every signal's seed derives from it.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output CSV for the training split.
        #[arg(long)]
        out: PathBuf,
        /// Optional output CSV for the held-out test split.
        #[arg(long)]
        test_out: Option<PathBuf>,
    },
    /// Decompose one stored signal into wavelet detail/approximation levels.
    Decompose {
        /// Dataset CSV produced by `generate`.
        #[arg(long)]
        input: PathBuf,
        /// Row index within the file (0-based).
        #[arg(long, default_value_t = 0)]
        row: usize,
        /// Number of decomposition levels.
        #[arg(long, default_value_t = N_LEVELS)]
        levels: usize,
        /// Output JSON mapping D1..Dn / An to coefficient lists.
        #[arg(long)]
        out: PathBuf,
    },
    /// Extract feature vectors (six statistics × eleven levels) from a dataset CSV.
    Extract {
        /// Dataset CSV produced by `generate`.
        #[arg(long)]
        input: PathBuf,
        /// Output feature CSV.
        #[arg(long)]
        out: PathBuf,
    },
    /// Train a classifier on a feature CSV and save the model as JSON.
    Train {
        /// Training feature CSV produced by `extract`.
        #[arg(long)]
        features: PathBuf,
        /// Hidden-layer activation.
        #[arg(long, default_value = "sigmoid", value_parser = parse_activation)]
        activation: ActivationKind,
        /// Hidden-node count (default: 700 for 14+ classes, else 500).
        #[arg(long)]
        hidden: Option<usize>,
        /// Samples per sequential-update chunk.
        #[arg(long, default_value_t = 50)]
        chunk: usize,
        /// Seed for hidden-layer weights and training-order shuffle.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Output model JSON.
        #[arg(long)]
        out: PathBuf,
    },
    /// Evaluate a saved model on a feature CSV.
    Eval {
        /// Model JSON produced by `train`.
        #[arg(long)]
        model: PathBuf,
        /// Feature CSV with true labels.
        #[arg(long)]
        features: PathBuf,
        /// Output evaluation JSON.
        #[arg(long)]
        out: PathBuf,
        /// Optional confusion-matrix CSV.
        #[arg(long)]
        confusion_out: Option<PathBuf>,
    },
    /// Sweep hidden-node counts on a preset and emit accuracy/time per count.
    Sweep {
        /// Dataset preset.
        #[arg(long, default_value = "16class")]
        preset: String,
        /// Hidden-node counts, ascending.
        #[arg(long, value_delimiter = ',', default_values_t = [50usize, 100, 200, 500, 700, 1000])]
        hidden: Vec<usize>,
        /// Hidden-layer activation.
        #[arg(long, default_value = "sigmoid", value_parser = parse_activation)]
        activation: ActivationKind,
        /// Master seed.
        #[arg(long, default_value_t = 123)]
        seed: u64,
        /// Dataset/model repetitions averaged per row.
        #[arg(long, default_value_t = 5)]
        seeds: u64,
        /// Output sweep CSV.
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare activations on one preset; emit a comparison CSV (and optional full report).
    Compare {
        /// Dataset preset.
        #[arg(long, default_value = "16class")]
        preset: String,
        /// Activations to compare.
        #[arg(long, value_delimiter = ',', value_parser = parse_activation,
              default_values_t = ActivationKind::ALL)]
        activations: Vec<ActivationKind>,
        /// Hidden-node count (default: the preset's standard count).
        #[arg(long)]
        hidden: Option<usize>,
        /// Master seed.
        #[arg(long, default_value_t = 123)]
        seed: u64,
        /// Dataset/model repetitions averaged per cell.
        #[arg(long, default_value_t = 5)]
        seeds: u64,
        /// Output comparison CSV.
        #[arg(long)]
        out: PathBuf,
        /// Optional full per-seed report JSON.
        #[arg(long)]
        report_out: Option<PathBuf>,
    },
    /// Re-run a built-in reference experiment and write its table with
    /// reference columns side by side.
    Reproduce {
        /// Which table: 3 (dataset sizing), 4 (activation comparison), 6 (hidden-node sweep).
        #[arg(long, value_parser = clap::value_parser!(u8))]
        table: u8,
        /// Dataset/model repetitions averaged per cell.
        #[arg(long, default_value_t = 5)]
        seeds: u64,
        /// Master seed.
        #[arg(long, default_value_t = 123)]
        seed: u64,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    if let Ok(threads) = std::env::var("PQ_OSELM_THREADS") {
        match threads.parse::<usize>() {
            Ok(n) if n > 0 => {
                // Ignore "already initialized": the cap is best-effort.
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("error: PQ_OSELM_THREADS must be a positive integer");
                return ExitCode::from(2);
            }
        }
    }
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

type CmdResult = Result<(), Box<dyn std::error::Error>>;

fn run(command: Command) -> CmdResult {
    match command {
        Command::Generate { classes, per_class, preset, seed, out, test_out } => {
            generate_cmd(classes, per_class, preset, seed, &out, test_out.as_deref())
        }
        Command::Decompose { input, row, levels, out } => decompose_cmd(&input, row, levels, &out),
        Command::Extract { input, out } => extract_cmd(&input, &out),
        Command::Train { features, activation, hidden, chunk, seed, out } => {
            train_cmd(&features, activation, hidden, chunk, seed, &out)
        }
        Command::Eval { model, features, out, confusion_out } => {
            eval_cmd(&model, &features, &out, confusion_out.as_deref())
        }
        Command::Sweep { preset, hidden, activation, seed, seeds, out } => {
            sweep_cmd(&preset, &hidden, activation, seed, seeds, &out)
        }
        Command::Compare { preset, activations, hidden, seed, seeds, out, report_out } => {
            compare_cmd(&preset, activations, hidden, seed, seeds, &out, report_out.as_deref())
        }
        Command::Reproduce { table, seeds, seed, out } => reproduce_cmd(table, seeds, seed, &out),
    }
}

/// Sidecar path for a dataset CSV: `data.csv` → `data.params.json`.
fn params_path(csv: &Path) -> PathBuf {
    csv.with_extension("params.json")
}

fn write_split(csv: &Path, signals: &[Signal]) -> CmdResult {
    io::write_dataset_csv(csv, signals)?;
    io::write_params_json(&params_path(csv), signals)?;
    println!("wrote {} rows to {}", signals.len(), csv.display());
    Ok(())
}

fn generate_cmd(
    classes: Vec<EventClass>,
    per_class: usize,
    preset: Option<String>,
    seed: u64,
    out: &Path,
    test_out: Option<&Path>,
) -> CmdResult {
    let spec = match preset {
        Some(name) => DatasetSpec::from_preset(&name, seed)?,
        None => {
            if classes.is_empty() {
                return Err("pass --classes or --preset".into());
            }
            if per_class == 0 {
                return Err("--per-class must be positive".into());
            }
            let counts: BTreeMap<EventClass, usize> =
                classes.into_iter().map(|c| (c, per_class)).collect();
            DatasetSpec::from_counts(counts, seed)
        }
    };
    let (train, test, _) = harness::synthesize_split(&spec, spec.master_seed)?;
    write_split(out, &train)?;
    if let Some(test_path) = test_out {
        write_split(test_path, &test)?;
    }
    Ok(())
}

fn decompose_cmd(input: &Path, row: usize, levels: usize, out: &Path) -> CmdResult {
    let rows = io::read_dataset_csv(input)?;
    let picked = rows
        .get(row)
        .ok_or_else(|| format!("row {row} out of range ({} rows in {})", rows.len(), input.display()))?;
    let decomp = dwt::decompose(&picked.samples, levels)?;
    io::write_decomposition_json(out, &decomp)?;
    println!(
        "decomposed row {row} ({}) into {} levels -> {}",
        picked.label,
        decomp.levels(),
        out.display()
    );
    Ok(())
}

fn extract_cmd(input: &Path, out: &Path) -> CmdResult {
    let rows = io::read_dataset_csv(input)?;
    let features = rows
        .par_iter()
        .map(|r: &SignalRow| {
            let decomp = dwt::decompose(&r.samples, N_LEVELS).map_err(|e| e.to_string())?;
            extract(&decomp, r.label).map_err(|e| e.to_string())
        })
        .collect::<Result<Vec<FeatureVector>, String>>()?;
    io::write_features_csv(out, &features)?;
    println!("extracted {} feature rows to {}", features.len(), out.display());
    Ok(())
}

/// Class vocabulary of a feature set: unique labels in class order.
fn vocabulary(features: &[FeatureVector]) -> Vec<EventClass> {
    let mut classes: Vec<EventClass> = features.iter().map(|f| f.label).collect();
    classes.sort_unstable_by_key(|c| c.index());
    classes.dedup();
    classes
}

fn train_cmd(
    features_path: &Path,
    activation: ActivationKind,
    hidden: Option<usize>,
    chunk: usize,
    master_seed: u64,
    out: &Path,
) -> CmdResult {
    if chunk == 0 {
        return Err("--chunk must be positive".into());
    }
    let features = io::read_features_csv(features_path)?;
    let classes = vocabulary(&features);
    let hidden = hidden.unwrap_or_else(|| harness::default_hidden_count(classes.len()));

    // Shuffle the presentation order, then initialize on the first
    // max(hidden, chunk) rows and stream the rest chunk by chunk.
    let mut order: Vec<&FeatureVector> = features.iter().collect();
    use rand::seq::SliceRandom;
    order.shuffle(&mut seed::rng(master_seed, &[seed::STREAM_SHUFFLE]));
    let x = ndarray::Array2::from_shape_fn((order.len(), order[0].values.len()), |(i, j)| {
        order[i].values[j]
    });
    let labels: Vec<EventClass> = order.iter().map(|f| f.label).collect();
    let t = one_hot(&labels, &classes);
    let n0 = hidden.max(chunk).min(order.len());
    let model_seed = seed::derive(master_seed, &[seed::STREAM_MODEL]);
    let mut model = OselmModel::init_phase(
        x.slice(ndarray::s![..n0, ..]),
        t.slice(ndarray::s![..n0, ..]),
        &classes,
        hidden,
        activation,
        model_seed,
    )?;
    let mut at = n0;
    while at < order.len() {
        let hi = (at + chunk).min(order.len());
        model.sequential_update(x.slice(ndarray::s![at..hi, ..]), t.slice(ndarray::s![at..hi, ..]))?;
        at = hi;
    }

    let correct = features
        .iter()
        .filter(|f| model.predict(&f.values).1 == f.label)
        .count();
    io::save_model(out, &model)?;
    println!(
        "trained {} ({} nodes, {} classes, {} samples): training accuracy {:.4}; model -> {}",
        activation,
        hidden,
        classes.len(),
        features.len(),
        correct as f64 / features.len() as f64,
        out.display()
    );
    Ok(())
}

fn eval_cmd(
    model_path: &Path,
    features_path: &Path,
    out: &Path,
    confusion_out: Option<&Path>,
) -> CmdResult {
    let model = io::load_model(model_path)?;
    let features = io::read_features_csv(features_path)?;
    let classes = model.classes().to_vec();
    let m = classes.len();
    let index_of = |c: EventClass| classes.iter().position(|k| *k == c);

    let mut confusion = vec![vec![0u64; m]; m];
    for f in &features {
        let true_idx = index_of(f.label).ok_or_else(|| {
            format!("label {} in {} is not among the model's classes", f.label, features_path.display())
        })?;
        let (_, predicted) = model.predict(&f.values);
        confusion[true_idx][index_of(predicted).expect("prediction is in vocabulary")] += 1;
    }
    let per_class: Vec<f64> = confusion
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let total: u64 = row.iter().sum();
            if total == 0 { 1.0 } else { row[i] as f64 / total as f64 }
        })
        .collect();
    let correct: u64 = (0..m).map(|i| confusion[i][i]).sum();
    let overall = correct as f64 / features.len() as f64;

    let summary = serde_json::json!({
        "model": model_path.display().to_string(),
        "n_samples": features.len(),
        "classes": classes,
        "overall_accuracy": overall,
        "per_class_accuracy": per_class,
        "confusion": confusion,
    });
    io::atomic_write(out, format!("{:#}\n", summary).as_bytes())?;
    if let Some(cpath) = confusion_out {
        let mut text = String::from("true_class");
        for c in &classes {
            text += &format!(",{c}");
        }
        text.push('\n');
        for (c, row) in classes.iter().zip(&confusion) {
            text += &c.to_string();
            for v in row {
                text += &format!(",{v}");
            }
            text.push('\n');
        }
        io::atomic_write(cpath, text.as_bytes())?;
    }
    println!("evaluated {} samples: overall accuracy {:.4}", features.len(), overall);
    Ok(())
}

fn sweep_cmd(
    preset: &str,
    hidden: &[usize],
    activation: ActivationKind,
    seed: u64,
    seeds: u64,
    out: &Path,
) -> CmdResult {
    let mut spec = ExperimentSpec::preset(preset, seed)?;
    spec.activations = vec![activation];
    spec.n_seeds = seeds;
    let rows = neuron_sweep(&spec, hidden)?;
    let csv_rows: Vec<SweepCsvRow> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| SweepCsvRow::from_sweep(i + 1, r))
        .collect();
    io::write_sweep_csv(out, &csv_rows)?;
    println!("swept {} hidden counts on {preset} -> {}", rows.len(), out.display());
    Ok(())
}

fn compare_cmd(
    preset: &str,
    activations: Vec<ActivationKind>,
    hidden: Option<usize>,
    seed: u64,
    seeds: u64,
    out: &Path,
    report_out: Option<&Path>,
) -> CmdResult {
    let mut spec = ExperimentSpec::preset(preset, seed)?;
    spec.activations = activations;
    if let Some(l) = hidden {
        spec.hidden_counts = vec![l];
    }
    spec.n_seeds = seeds;
    let reports = run_experiment(&spec)?;
    let summaries = summarize_reports(&spec, &reports);
    let rows: Vec<ComparisonRow> =
        summaries.iter().map(|s| ComparisonRow::from_summary(preset, s)).collect();
    io::write_comparison_csv(out, &rows)?;
    if let Some(rpath) = report_out {
        io::write_report_json(rpath, &io::ReportFile { spec, reports, summaries })?;
    }
    println!("compared {} cells on {preset} -> {}", rows.len(), out.display());
    Ok(())
}

fn reproduce_cmd(table: u8, seeds: u64, seed: u64, out_dir: &Path) -> CmdResult {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| format!("cannot create {}: {e}", out_dir.display()))?;
    match table {
        3 => {
            let rows: Vec<SizingRow> = reference::DATASET_SIZING
                .iter()
                .map(|&(preset, n_classes, n_train, n_test)| SizingRow {
                    preset: preset.to_owned(),
                    n_classes,
                    n_train,
                    n_test,
                })
                .collect();
            let path = out_dir.join("table3.csv");
            io::write_sizing_csv(&path, &rows)?;
            for r in &rows {
                println!("{}: {} classes, {} train / {} test", r.preset, r.n_classes, r.n_train, r.n_test);
            }
            println!("wrote {}", path.display());
        }
        4 => {
            let mut rows = Vec::new();
            for &(preset, _, _, _) in reference::DATASET_SIZING {
                let mut spec = ExperimentSpec::preset(preset, seed)?;
                spec.activations = ActivationKind::ALL.to_vec();
                spec.n_seeds = seeds;
                let summaries = harness::compare_activations(&spec)?;
                for s in &summaries {
                    let mut row = ComparisonRow::from_summary(preset, s);
                    row.reference = reference::ACTIVATION_COMPARISON
                        .iter()
                        .find(|r| {
                            r.class_set == preset
                                && r.activation == s.activation
                                && r.hidden_count == s.hidden_count
                        })
                        .map(|r| ComparisonRef {
                            train_time_s: r.train_time_s,
                            test_time_s: r.test_time_s,
                            train_accuracy_pct: r.train_accuracy_pct,
                            test_accuracy_pct: r.test_accuracy_pct,
                        });
                    rows.push(row);
                }
            }
            let path = out_dir.join("table4.csv");
            io::write_comparison_csv(&path, &rows)?;
            println!("wrote {} rows to {}", rows.len(), path.display());
        }
        6 => {
            let mut spec = ExperimentSpec::preset("16class", seed)?;
            spec.n_seeds = seeds;
            let l_values: Vec<usize> =
                reference::HIDDEN_SWEEP.iter().map(|r| r.hidden_count).collect();
            let rows = neuron_sweep(&spec, &l_values)?;
            let csv_rows: Vec<SweepCsvRow> = rows
                .iter()
                .zip(reference::HIDDEN_SWEEP)
                .enumerate()
                .map(|(i, (r, reference))| {
                    let mut row = SweepCsvRow::from_sweep(i + 1, r);
                    row.ref_test_accuracy_pct = Some(reference.test_accuracy_pct);
                    row.ref_train_time_s = Some(reference.train_time_s);
                    row
                })
                .collect();
            let path = out_dir.join("table6.csv");
            io::write_sweep_csv(&path, &csv_rows)?;
            println!("wrote {} rows to {}", csv_rows.len(), path.display());
        }
        other => return Err(format!("unknown table {other} (expected 3, 4, or 6)").into()),
    }
    Ok(())
}
