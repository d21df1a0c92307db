//! Published reference values that `pqd reproduce` prints side by side with
//! the toolkit's measurements (times in seconds, accuracies in percent).

use pqd_core::oselm::ActivationKind;

/// One reference row of the activation-comparison table.
pub struct ComparisonReference {
    pub class_set: &'static str,
    pub activation: ActivationKind,
    pub hidden_count: usize,
    pub train_time_s: f64,
    pub test_time_s: f64,
    pub train_accuracy_pct: f64,
    pub test_accuracy_pct: f64,
}

/// Reference activation comparison: three class sets × four activations.
pub const ACTIVATION_COMPARISON: &[ComparisonReference] = &[
    ComparisonReference { class_set: "11class", activation: ActivationKind::Sigmoid, hidden_count: 500, train_time_s: 2.6052, test_time_s: 0.0624, train_accuracy_pct: 99.85, test_accuracy_pct: 99.63 },
    ComparisonReference { class_set: "11class", activation: ActivationKind::Rbf, hidden_count: 500, train_time_s: 2.5584, test_time_s: 0.1872, train_accuracy_pct: 97.73, test_accuracy_pct: 96.89 },
    ComparisonReference { class_set: "11class", activation: ActivationKind::Sinusoid, hidden_count: 500, train_time_s: 3.1044, test_time_s: 0.0624, train_accuracy_pct: 99.91, test_accuracy_pct: 99.51 },
    ComparisonReference { class_set: "11class", activation: ActivationKind::Hardlim, hidden_count: 500, train_time_s: 2.1372, test_time_s: 0.0624, train_accuracy_pct: 89.52, test_accuracy_pct: 88.47 },
    ComparisonReference { class_set: "13class", activation: ActivationKind::Sigmoid, hidden_count: 500, train_time_s: 3.0732, test_time_s: 0.0624, train_accuracy_pct: 99.77, test_accuracy_pct: 99.43 },
    ComparisonReference { class_set: "13class", activation: ActivationKind::Rbf, hidden_count: 500, train_time_s: 2.6208, test_time_s: 0.436, train_accuracy_pct: 97.01, test_accuracy_pct: 95.90 },
    ComparisonReference { class_set: "13class", activation: ActivationKind::Sinusoid, hidden_count: 500, train_time_s: 2.6832, test_time_s: 0.0, train_accuracy_pct: 99.72, test_accuracy_pct: 99.09 },
    ComparisonReference { class_set: "13class", activation: ActivationKind::Hardlim, hidden_count: 500, train_time_s: 2.0436, test_time_s: 0.0312, train_accuracy_pct: 84.84, test_accuracy_pct: 79.29 },
    ComparisonReference { class_set: "16class", activation: ActivationKind::Sigmoid, hidden_count: 700, train_time_s: 5.4288, test_time_s: 0.1092, train_accuracy_pct: 99.93, test_accuracy_pct: 99.72 },
    ComparisonReference { class_set: "16class", activation: ActivationKind::Rbf, hidden_count: 700, train_time_s: 5.85, test_time_s: 0.1716, train_accuracy_pct: 97.75, test_accuracy_pct: 97.25 },
    ComparisonReference { class_set: "16class", activation: ActivationKind::Sinusoid, hidden_count: 700, train_time_s: 6.2088, test_time_s: 0.0624, train_accuracy_pct: 99.93, test_accuracy_pct: 99.17 },
    ComparisonReference { class_set: "16class", activation: ActivationKind::Hardlim, hidden_count: 700, train_time_s: 4.3524, test_time_s: 0.0624, train_accuracy_pct: 90.76, test_accuracy_pct: 87.98 },
];

/// One reference row of the hidden-node sweep table.
pub struct SweepReference {
    pub hidden_count: usize,
    pub test_accuracy_pct: f64,
    pub train_time_s: f64,
}

/// Reference hidden-node sweep (16 rows, 50..1000 nodes).
pub const HIDDEN_SWEEP: &[SweepReference] = &[
    SweepReference { hidden_count: 50, test_accuracy_pct: 85.78, train_time_s: 0.1248 },
    SweepReference { hidden_count: 100, test_accuracy_pct: 91.19, train_time_s: 0.2496 },
    SweepReference { hidden_count: 150, test_accuracy_pct: 94.68, train_time_s: 0.4368 },
    SweepReference { hidden_count: 200, test_accuracy_pct: 97.43, train_time_s: 0.624 },
    SweepReference { hidden_count: 250, test_accuracy_pct: 97.98, train_time_s: 0.8763 },
    SweepReference { hidden_count: 300, test_accuracy_pct: 98.44, train_time_s: 1.1856 },
    SweepReference { hidden_count: 350, test_accuracy_pct: 98.53, train_time_s: 1.6848 },
    SweepReference { hidden_count: 400, test_accuracy_pct: 98.99, train_time_s: 2.0124 },
    SweepReference { hidden_count: 450, test_accuracy_pct: 99.08, train_time_s: 2.2152 },
    SweepReference { hidden_count: 500, test_accuracy_pct: 99.08, train_time_s: 2.808 },
    SweepReference { hidden_count: 550, test_accuracy_pct: 99.27, train_time_s: 3.6816 },
    SweepReference { hidden_count: 600, test_accuracy_pct: 99.27, train_time_s: 4.602 },
    SweepReference { hidden_count: 700, test_accuracy_pct: 99.36, train_time_s: 6.2244 },
    SweepReference { hidden_count: 800, test_accuracy_pct: 99.27, train_time_s: 7.1136 },
    SweepReference { hidden_count: 900, test_accuracy_pct: 99.27, train_time_s: 9.9685 },
    SweepReference { hidden_count: 1000, test_accuracy_pct: 99.27, train_time_s: 13.0729 },
];

/// The three dataset presets' published sizing.
pub const DATASET_SIZING: &[(&str, usize, usize, usize)] = &[
    ("11class", 11, 3254, 815),
    ("13class", 13, 3510, 879),
    ("16class", 16, 4353, 1090),
];
