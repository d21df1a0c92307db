//! Online-sequential extreme learning machine.
//!
//! A single hidden layer with randomly drawn, permanently frozen parameters
//! feeds a linear output layer. The output weights are the least-squares
//! solution for the data seen so far: an initialization chunk is solved
//! through the normal equations, and every later chunk refines the solution
//! with a recursive least-squares update that never revisits old data. With a
//! full-rank initialization the sequential solution matches the batch
//! least-squares solution on the concatenated data, which is the property the
//! tests pin.
//!
//! Feature vectors are z-scored with per-feature statistics fitted on the
//! initialization chunk and frozen thereafter; all entry points take raw
//! (unstandardized) features and apply the stored transform internally.

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::seed;
use crate::siggen::EventClass;

/// Condition-number estimate above which the initialization Gram matrix is
/// treated as numerically singular and ridge regularization engages.
const CONDITION_LIMIT: f64 = 1e12;

/// Ridge coefficient relative to the mean diagonal of the Gram matrix.
const RIDGE_SCALE: f64 = 1e-8;

/// Errors surfaced by model construction and training.
#[derive(Debug, Error)]
pub enum OselmError {
    /// The initialization chunk must contain at least as many rows as there
    /// are hidden nodes, or the initial least-squares problem is
    /// underdetermined.
    #[error("initialization chunk has {got} rows but at least {needed} (the hidden-node count) are required")]
    InsufficientInitData { got: usize, needed: usize },
    /// Sequential updates need the covariance state produced by
    /// initialization (and optionally persisted alongside the model).
    #[error("sequential update requires an initialized model carrying its covariance matrix")]
    NotInitialized,
}

/// The four hidden-node activation functions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActivationKind {
    /// Logistic unit `1 / (1 + exp(-(a·x + b)))`.
    Sigmoid,
    /// Gaussian radial basis unit `exp(-b·‖x - a‖²)`; `a` is the center and
    /// `b > 0` the impact factor.
    Rbf,
    /// `sin(a·x + b)`.
    Sinusoid,
    /// Step unit: `1` if `a·x + b ≥ 0`, else `0`.
    Hardlim,
}

impl ActivationKind {
    /// All four kinds, in comparison-table order.
    pub const ALL: [ActivationKind; 4] = [
        ActivationKind::Sigmoid,
        ActivationKind::Rbf,
        ActivationKind::Sinusoid,
        ActivationKind::Hardlim,
    ];

    /// Canonical lowercase name.
    pub fn name(self) -> &'static str {
        match self {
            ActivationKind::Sigmoid => "sigmoid",
            ActivationKind::Rbf => "rbf",
            ActivationKind::Sinusoid => "sinusoid",
            ActivationKind::Hardlim => "hardlim",
        }
    }
}

impl std::fmt::Display for ActivationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Error for unrecognized activation names.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("unknown activation {0:?} (expected sigmoid, rbf, sinusoid, or hardlim)")]
pub struct ParseActivationError(pub String);

impl std::str::FromStr for ActivationKind {
    type Err = ParseActivationError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "sigmoid" => Ok(ActivationKind::Sigmoid),
            "rbf" => Ok(ActivationKind::Rbf),
            "sinusoid" | "sinusoidal" => Ok(ActivationKind::Sinusoid),
            "hardlim" => Ok(ActivationKind::Hardlim),
            _ => Err(ParseActivationError(s.to_string())),
        }
    }
}

/// Frozen random hidden layer: one row of `weights_a` per hidden node
/// (additive input weights, or RBF centers) plus one `biases_b` entry per
/// node (additive bias, or RBF impact factor).
///
/// Parameters are drawn on the conventional ranges: weight and center
/// entries uniform on [-1, 1], additive biases uniform on [-1, 1], and RBF
/// impact factors uniform on (0, 1]. Activations apply these parameters
/// directly — Sigmoid/Sinusoid/Hardlim on the raw argument a·x + b and RBF
/// as exp(−b·‖x−a‖²) — with no dimension-dependent rescaling, so a stored
/// model evaluates identically under any reimplementation of the same
/// formulas.
#[derive(Debug, Clone)]
pub struct HiddenLayer {
    weights_a: Array2<f64>,
    biases_b: Array1<f64>,
    activation: ActivationKind,
}

impl HiddenLayer {
    /// Draws a fresh layer: weight entries uniform on [-1, 1]; additive
    /// biases uniform on [-1, 1]; RBF impact factors uniform on (0, 1].
    fn random<R: Rng>(l: usize, n: usize, activation: ActivationKind, rng: &mut R) -> Self {
        let mut weights_a = Array2::zeros((l, n));
        let mut biases_b = Array1::zeros(l);
        for i in 0..l {
            for j in 0..n {
                weights_a[[i, j]] = rng.random_range(-1.0..=1.0);
            }
            biases_b[i] = match activation {
                // 1 - u maps the half-open [0, 1) draw onto (0, 1].
                ActivationKind::Rbf => 1.0 - rng.random::<f64>(),
                _ => rng.random_range(-1.0..=1.0),
            };
        }
        HiddenLayer { weights_a, biases_b, activation }
    }

    /// Number of hidden nodes.
    pub fn node_count(&self) -> usize {
        self.weights_a.nrows()
    }

    /// Expected input dimension.
    pub fn input_dim(&self) -> usize {
        self.weights_a.ncols()
    }

    /// Hidden-node outputs for one standardized input vector.
    pub fn activate(&self, x: ArrayView1<f64>) -> Array1<f64> {
        let batch = self.activate_batch(x.insert_axis(Axis(0)));
        batch.index_axis_move(Axis(0), 0)
    }

    /// Hidden-node outputs for a batch of standardized rows: returns the
    /// N×L matrix H with H[j][i] = G(a_i, b_i, x_j).
    fn activate_batch(&self, x: ArrayView2<f64>) -> Array2<f64> {
        assert_eq!(
            x.ncols(),
            self.input_dim(),
            "input width must match the hidden layer's input dimension"
        );
        // All four activations start from X·Aᵀ; the RBF distance expands as
        // ‖x - a‖² = ‖x‖² - 2·x·a + ‖a‖².
        let mut h = x.dot(&self.weights_a.t());
        match self.activation {
            ActivationKind::Sigmoid => {
                h.zip_mut_with(&self.broadcast_bias(), |v, &b| {
                    *v = 1.0 / (1.0 + (-(*v + b)).exp());
                });
            }
            ActivationKind::Sinusoid => {
                h.zip_mut_with(&self.broadcast_bias(), |v, &b| *v = (*v + b).sin());
            }
            ActivationKind::Hardlim => {
                h.zip_mut_with(&self.broadcast_bias(), |v, &b| {
                    *v = if *v + b >= 0.0 { 1.0 } else { 0.0 };
                });
            }
            ActivationKind::Rbf => {
                let x_norms: Vec<f64> = x.rows().into_iter().map(|r| r.dot(&r)).collect();
                let a_norms: Vec<f64> = self.weights_a.rows().into_iter().map(|r| r.dot(&r)).collect();
                for (j, mut row) in h.rows_mut().into_iter().enumerate() {
                    for (i, v) in row.iter_mut().enumerate() {
                        let d2 = (x_norms[j] - 2.0 * *v + a_norms[i]).max(0.0);
                        *v = (-self.biases_b[i] * d2).exp();
                    }
                }
            }
        }
        h
    }

    fn broadcast_bias(&self) -> Array2<f64> {
        self.biases_b
            .view()
            .insert_axis(Axis(0))
            .broadcast((1, self.biases_b.len()))
            .unwrap()
            .to_owned()
    }
}

/// Per-feature z-score transform fitted on the initialization chunk and
/// frozen for the model's lifetime.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    mean: Vec<f64>,
    std: Vec<f64>,
}

impl Standardizer {
    /// Fits per-column mean and sample standard deviation. Columns with zero
    /// spread get a divisor of 1.0 so they standardize to exactly zero.
    fn fit(rows: ArrayView2<f64>) -> Standardizer {
        let n = rows.nrows() as f64;
        let mean: Vec<f64> = rows.mean_axis(Axis(0)).unwrap().to_vec();
        let std: Vec<f64> = rows
            .axis_iter(Axis(1))
            .zip(&mean)
            .map(|(col, &mu)| {
                if rows.nrows() < 2 {
                    return 1.0;
                }
                let ss: f64 = col.iter().map(|v| (v - mu) * (v - mu)).sum();
                let s = (ss / (n - 1.0)).sqrt();
                if s == 0.0 { 1.0 } else { s }
            })
            .collect();
        Standardizer { mean, std }
    }

    /// Applies the transform to a batch of raw rows.
    fn apply(&self, rows: ArrayView2<f64>) -> Array2<f64> {
        assert_eq!(rows.ncols(), self.mean.len(), "feature width mismatch");
        let mut out = rows.to_owned();
        for mut row in out.rows_mut() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = (*v - self.mean[j]) / self.std[j];
            }
        }
        out
    }
}

/// Trained (or training) classifier: frozen hidden layer, evolving output
/// weights `beta`, and the covariance-like matrix `P` that drives sequential
/// updates.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "ModelFile", into = "ModelFile")]
pub struct OselmModel {
    hidden: HiddenLayer,
    beta: Array2<f64>,
    /// Inverse-Gram state. `None` for models loaded from persistence without
    /// it, which freezes them: prediction works, updates do not.
    p: Option<Array2<f64>>,
    classes: Vec<EventClass>,
    standardizer: Standardizer,
    seed: u64,
    chunks_seen: u64,
    /// `Some(lambda)` when the initialization Gram matrix was numerically
    /// singular and ridge regularization engaged (reported, not fatal).
    ridge_lambda: Option<f64>,
}

/// Builds one-hot target rows for `labels` against a class vocabulary.
/// Column order follows `classes`; every label must appear in the vocabulary.
pub fn one_hot(labels: &[EventClass], classes: &[EventClass]) -> Array2<f64> {
    let mut t = Array2::zeros((labels.len(), classes.len()));
    for (row, label) in labels.iter().enumerate() {
        let col = classes
            .iter()
            .position(|c| c == label)
            .unwrap_or_else(|| panic!("label {label} is not in the class vocabulary"));
        t[[row, col]] = 1.0;
    }
    t
}

impl OselmModel {
    /// Solves the initialization chunk in one batch: fits the standardizer,
    /// draws the hidden layer from `rng_seed`, builds H₀, and computes
    /// P₀ = (H₀ᵀH₀)⁻¹ and β⁰ = P₀H₀ᵀT₀. `features` are raw rows (one per
    /// sample); `targets` are one-hot rows matching the `classes` vocabulary.
    ///
    /// A numerically singular Gram matrix (condition estimate above 1e12, as
    /// step activations readily produce) engages a ridge fallback
    /// (H₀ᵀH₀ + λI with λ = 1e-8·trace/L), recorded on the model as
    /// [`OselmModel::ridge_lambda`].
    pub fn init_phase(
        features: ArrayView2<f64>,
        targets: ArrayView2<f64>,
        classes: &[EventClass],
        l: usize,
        activation: ActivationKind,
        rng_seed: u64,
    ) -> Result<OselmModel, OselmError> {
        let n0 = features.nrows();
        if n0 < l {
            return Err(OselmError::InsufficientInitData { got: n0, needed: l });
        }
        assert!(l > 0, "hidden-node count must be positive");
        assert_eq!(targets.nrows(), n0, "feature and target row counts must match");
        assert_eq!(targets.ncols(), classes.len(), "target width must match the class vocabulary");

        let standardizer = Standardizer::fit(features);
        let x = standardizer.apply(features);

        let mut rng = seed::rng(rng_seed, &[seed::STREAM_MODEL]);
        let hidden = HiddenLayer::random(l, features.ncols(), activation, &mut rng);

        let h0 = hidden.activate_batch(x.view());
        let gram = h0.t().dot(&h0);

        let mut factor = gram.clone();
        let mut ridge_lambda = None;
        let healthy = linalg::cholesky_in_place(&mut factor)
            && linalg::condition_estimate(&factor) <= CONDITION_LIMIT;
        if !healthy {
            let trace: f64 = gram.diag().sum();
            let lambda = (RIDGE_SCALE * trace / l as f64).max(1e-12);
            factor = gram;
            for d in factor.diag_mut() {
                *d += lambda;
            }
            let ok = linalg::cholesky_in_place(&mut factor);
            assert!(ok, "ridge-regularized Gram matrix must be positive definite");
            ridge_lambda = Some(lambda);
        }

        let p = linalg::spd_inverse_from_factor(&factor);
        // β solved directly from the factored normal equations (not via P)
        // for accuracy.
        let rhs = h0.t().dot(&targets);
        let beta = linalg::solve_with_factor(&factor, rhs.view());

        Ok(OselmModel {
            hidden,
            beta,
            p: Some(p),
            classes: classes.to_vec(),
            standardizer,
            seed: rng_seed,
            chunks_seen: 0,
            ridge_lambda,
        })
    }

    /// Folds one chunk of raw feature rows and one-hot targets into the
    /// model. Chunks of one row take the scalar rank-one (Sherman–Morrison)
    /// path; larger chunks solve the chunk-sized system
    /// S = I + H·P·Hᵀ. Both use the updated covariance in the weight
    /// correction, so any chunking of the same rows yields the same weights
    /// up to rounding.
    pub fn sequential_update(
        &mut self,
        features: ArrayView2<f64>,
        targets: ArrayView2<f64>,
    ) -> Result<(), OselmError> {
        let p = self.p.as_mut().ok_or(OselmError::NotInitialized)?;
        assert_eq!(features.nrows(), targets.nrows(), "feature and target row counts must match");
        assert!(features.nrows() >= 1, "chunk must contain at least one row");
        assert_eq!(targets.ncols(), self.classes.len(), "target width must match the class vocabulary");

        let x = self.standardizer.apply(features);
        let h = self.hidden.activate_batch(x.view());

        if h.nrows() == 1 {
            let hrow = h.row(0);
            let t = targets.row(0);
            let v = p.dot(&hrow); // P·h
            let denom = 1.0 + hrow.dot(&v);
            let gain = &v / denom; // = P_next·h
            // Rank-one covariance downdate: P -= (P h hᵀ P) / (1 + hᵀ P h).
            for (i, mut row) in p.rows_mut().into_iter().enumerate() {
                let vi = v[i];
                for (j, pv) in row.iter_mut().enumerate() {
                    *pv -= vi * gain[j];
                }
            }
            let residual = &t.to_owned() - &hrow.dot(&self.beta);
            for (i, mut row) in self.beta.rows_mut().into_iter().enumerate() {
                let gi = gain[i];
                for (j, bv) in row.iter_mut().enumerate() {
                    *bv += gi * residual[j];
                }
            }
        } else {
            let m = p.dot(&h.t()); // L×N
            let mut s = h.dot(&m); // N×N
            for d in s.diag_mut() {
                *d += 1.0;
            }
            let mut s_factor = s;
            let ok = linalg::cholesky_in_place(&mut s_factor);
            assert!(ok, "innovation matrix I + H·P·Hᵀ must be positive definite");
            // G = M·S⁻¹ equals P_next·Hᵀ, the gain for both updates.
            let g = linalg::solve_with_factor(&s_factor, m.t()).reversed_axes();
            let g = g.as_standard_layout().to_owned();
            *p -= &g.dot(&m.t());
            // The downdate is algebraically symmetric; re-symmetrizing sheds
            // the rounding skew it accumulates.
            let pt = p.t().to_owned();
            *p += &pt;
            p.mapv_inplace(|v| 0.5 * v);
            let residual = &targets.to_owned() - &h.dot(&self.beta);
            self.beta += &g.dot(&residual);
        }

        self.chunks_seen += 1;
        Ok(())
    }

    /// Scores one raw feature vector and returns (per-class scores, argmax
    /// label). Ties break toward the lowest class index.
    pub fn predict(&self, x: &[f64]) -> (Vec<f64>, EventClass) {
        let row = ArrayView2::from_shape((1, x.len()), x).expect("contiguous input");
        let (scores, labels) = self.predict_batch(row);
        (scores.row(0).to_vec(), labels[0])
    }

    /// Scores a batch of raw feature rows.
    pub fn predict_batch(&self, xs: ArrayView2<f64>) -> (Array2<f64>, Vec<EventClass>) {
        let x = self.standardizer.apply(xs);
        let h = self.hidden.activate_batch(x.view());
        let scores = h.dot(&self.beta);
        let labels = scores
            .rows()
            .into_iter()
            .map(|row| {
                let mut best = 0;
                for (j, &v) in row.iter().enumerate() {
                    if v > row[best] {
                        best = j;
                    }
                }
                self.classes[best]
            })
            .collect();
        (scores, labels)
    }

    /// Hidden-layer response to raw feature rows: standardizes them with the
    /// frozen transform and applies the activation. Row i is h(xᵢ)ᵀ — the
    /// design matrix of the least-squares problem the output weights solve.
    pub fn hidden_responses(&self, features: ArrayView2<f64>) -> Array2<f64> {
        let x = self.standardizer.apply(features);
        self.hidden.activate_batch(x.view())
    }

    /// Output-weight matrix (hidden nodes × classes).
    pub fn beta(&self) -> ArrayView2<'_, f64> {
        self.beta.view()
    }

    /// Covariance-like state, present while the model can still learn.
    pub fn p_matrix(&self) -> Option<ArrayView2<'_, f64>> {
        self.p.as_ref().map(|p| p.view())
    }

    /// Class vocabulary in output-column order.
    pub fn classes(&self) -> &[EventClass] {
        &self.classes
    }

    /// Activation kind of the hidden layer.
    pub fn activation(&self) -> ActivationKind {
        self.hidden.activation
    }

    /// Hidden-node count L.
    pub fn hidden_count(&self) -> usize {
        self.hidden.node_count()
    }

    /// Expected raw feature dimension.
    pub fn input_dim(&self) -> usize {
        self.hidden.input_dim()
    }

    /// Seed the hidden layer was drawn from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Number of sequential chunks folded in since initialization.
    pub fn chunks_seen(&self) -> u64 {
        self.chunks_seen
    }

    /// Ridge coefficient if the initialization needed regularization.
    pub fn ridge_lambda(&self) -> Option<f64> {
        self.ridge_lambda
    }

    /// Per-feature standardization statistics fitted at initialization.
    pub fn standardizer(&self) -> &Standardizer {
        &self.standardizer
    }

    /// Drops the covariance state, freezing the model for prediction only.
    /// Used to persist compact models; a frozen model refuses updates.
    pub fn freeze(&mut self) {
        self.p = None;
    }
}

// -- persistence -----------------------------------------------------------------

/// JSON wire format for a model. Matrices are stored as row-major nested
/// arrays; `P` is optional so compact prediction-only files can omit it.
#[derive(Serialize, Deserialize)]
struct ModelFile {
    activation: ActivationKind,
    #[serde(rename = "L")]
    l: usize,
    n: usize,
    m: usize,
    weights_a: Vec<Vec<f64>>,
    biases_b: Vec<f64>,
    beta: Vec<Vec<f64>>,
    standardizer: Standardizer,
    seed: u64,
    classes: Vec<EventClass>,
    chunks_seen: u64,
    ridge_lambda: Option<f64>,
    #[serde(rename = "P", default, skip_serializing_if = "Option::is_none")]
    p: Option<Vec<Vec<f64>>>,
}

fn to_rows(a: &Array2<f64>) -> Vec<Vec<f64>> {
    a.rows().into_iter().map(|r| r.to_vec()).collect()
}

fn from_rows(rows: Vec<Vec<f64>>, what: &str) -> Result<Array2<f64>, String> {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, |r| r.len());
    if rows.iter().any(|r| r.len() != ncols) {
        return Err(format!("{what}: ragged rows"));
    }
    Array2::from_shape_vec((nrows, ncols), rows.into_iter().flatten().collect())
        .map_err(|e| format!("{what}: {e}"))
}

impl From<OselmModel> for ModelFile {
    fn from(model: OselmModel) -> ModelFile {
        ModelFile {
            activation: model.hidden.activation,
            l: model.hidden.node_count(),
            n: model.hidden.input_dim(),
            m: model.classes.len(),
            weights_a: to_rows(&model.hidden.weights_a),
            biases_b: model.hidden.biases_b.to_vec(),
            beta: to_rows(&model.beta),
            standardizer: model.standardizer,
            seed: model.seed,
            classes: model.classes,
            chunks_seen: model.chunks_seen,
            ridge_lambda: model.ridge_lambda,
            p: model.p.as_ref().map(to_rows),
        }
    }
}

impl TryFrom<ModelFile> for OselmModel {
    type Error = String;

    fn try_from(file: ModelFile) -> Result<OselmModel, String> {
        let weights_a = from_rows(file.weights_a, "weights_a")?;
        let beta = from_rows(file.beta, "beta")?;
        if weights_a.nrows() != file.l || weights_a.ncols() != file.n {
            return Err("weights_a shape disagrees with L and n".into());
        }
        if file.biases_b.len() != file.l {
            return Err("biases_b length disagrees with L".into());
        }
        if beta.nrows() != file.l || beta.ncols() != file.m {
            return Err("beta shape disagrees with L and m".into());
        }
        if file.classes.len() != file.m {
            return Err("class vocabulary length disagrees with m".into());
        }
        if file.standardizer.mean.len() != file.n || file.standardizer.std.len() != file.n {
            return Err("standardizer width disagrees with n".into());
        }
        if file.standardizer.std.iter().any(|s| *s <= 0.0 || !s.is_finite()) {
            return Err("standardizer divisors must be positive and finite".into());
        }
        if file.activation == ActivationKind::Rbf && file.biases_b.iter().any(|b| *b <= 0.0) {
            return Err("RBF impact factors must be positive".into());
        }
        let p = match file.p {
            Some(rows) => {
                let p = from_rows(rows, "P")?;
                if p.nrows() != file.l || p.ncols() != file.l {
                    return Err("P shape disagrees with L".into());
                }
                Some(p)
            }
            None => None,
        };
        Ok(OselmModel {
            hidden: HiddenLayer {
                weights_a,
                biases_b: Array1::from_vec(file.biases_b),
                activation: file.activation,
            },
            beta,
            p,
            classes: file.classes,
            standardizer: file.standardizer,
            seed: file.seed,
            chunks_seen: file.chunks_seen,
            ridge_lambda: file.ridge_lambda,
        })
    }
}

// -- dense symmetric positive-definite solves --------------------------------------

/// Minimal dense Cholesky kernel for the L×L solves the updates need. The
/// matrices here are Gram or innovation matrices: symmetric and positive
/// (semi-)definite by construction.
mod linalg {
    use ndarray::{Array2, ArrayView2};

    /// In-place lower Cholesky factorization. Returns false when a pivot is
    /// non-positive (the matrix is not numerically positive definite). On
    /// success the lower triangle holds the factor and the strict upper
    /// triangle is zeroed.
    pub fn cholesky_in_place(a: &mut Array2<f64>) -> bool {
        let n = a.nrows();
        assert_eq!(n, a.ncols(), "factorization needs a square matrix");
        let d = a.as_slice_mut().expect("standard-layout matrix");
        for i in 0..n {
            for j in 0..=i {
                let mut s = d[i * n + j];
                for t in 0..j {
                    s -= d[i * n + t] * d[j * n + t];
                }
                if i == j {
                    if s <= 0.0 || !s.is_finite() {
                        return false;
                    }
                    d[i * n + j] = s.sqrt();
                } else {
                    d[i * n + j] = s / d[j * n + j];
                }
            }
            for j in i + 1..n {
                d[i * n + j] = 0.0;
            }
        }
        true
    }

    /// Squared ratio of extreme factor diagonals: a cheap two-norm condition
    /// estimate for the factored matrix.
    pub fn condition_estimate(factor: &Array2<f64>) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = 0.0f64;
        for &v in factor.diag() {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if lo == 0.0 {
            return f64::INFINITY;
        }
        (hi / lo).powi(2)
    }

    /// Solves K·X = B given the lower Cholesky factor of K. `b` holds the
    /// right-hand sides as columns; the result has the same shape.
    pub fn solve_with_factor(factor: &Array2<f64>, b: ArrayView2<f64>) -> Array2<f64> {
        let n = factor.nrows();
        assert_eq!(b.nrows(), n, "right-hand side height must match the factor");
        let lt = factor.t().as_standard_layout().to_owned();
        let l_flat = factor.as_slice().expect("standard layout");
        let lt_flat = lt.as_slice().expect("standard layout");
        // Work on Bᵀ so each right-hand side is a contiguous row.
        let mut xt = b.t().as_standard_layout().to_owned();
        for mut rhs in xt.rows_mut() {
            let r = rhs.as_slice_mut().expect("standard layout");
            // Forward: L·y = b.
            for i in 0..n {
                let mut s = r[i];
                for t in 0..i {
                    s -= l_flat[i * n + t] * r[t];
                }
                r[i] = s / l_flat[i * n + i];
            }
            // Backward: Lᵀ·x = y, using Lᵀ rows for contiguous access.
            for i in (0..n).rev() {
                let mut s = r[i];
                for t in i + 1..n {
                    s -= lt_flat[i * n + t] * r[t];
                }
                r[i] = s / lt_flat[i * n + i];
            }
        }
        xt.reversed_axes().as_standard_layout().to_owned()
    }

    /// Explicit inverse of the factored matrix, symmetrized to shed the
    /// rounding skew of independent column solves.
    pub fn spd_inverse_from_factor(factor: &Array2<f64>) -> Array2<f64> {
        let n = factor.nrows();
        let inv = solve_with_factor(factor, Array2::eye(n).view());
        let invt = inv.t().to_owned();
        (&inv + &invt) * 0.5
    }
}
