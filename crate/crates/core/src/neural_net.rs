//! Feed-forward network with one sigmoid output unit, trained by
//! mini-batch stochastic gradient descent on log-loss.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::classifiers::{sigmoid, warn_if_unscaled};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};
use crate::rng::{self, Rng};

/// Hidden-layer nonlinearity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Activation {
    /// `max(0, z)`.
    Rectifier,
    /// `tanh(z)`.
    Tanh,
}

impl Activation {
    fn apply(self, z: f64) -> f64 {
        match self {
            Activation::Rectifier => z.max(0.0),
            Activation::Tanh => z.tanh(),
        }
    }

    /// Derivative expressed through the pre-activation `z` and output `a`.
    fn derivative(self, z: f64, a: f64) -> f64 {
        match self {
            Activation::Rectifier => {
                if z > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            Activation::Tanh => 1.0 - a * a,
        }
    }
}

/// Network shape and training schedule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpConfig {
    /// Widths of the hidden layers, input side first.
    pub hidden_layers: Vec<usize>,
    /// Hidden nonlinearity.
    pub activation: Activation,
    /// Passes over the training set.
    pub epochs: usize,
    /// SGD step size.
    pub learning_rate: f64,
    /// Rows per update.
    pub batch_size: usize,
    /// Seeds the initialization and the epoch shuffles.
    pub seed: u64,
    /// Weight decay `l2 / 2 * |W|^2` (biases excluded).
    pub l2_reg: f64,
}

impl Default for MlpConfig {
    fn default() -> Self {
        Self {
            hidden_layers: vec![50, 50],
            activation: Activation::Rectifier,
            epochs: 10,
            learning_rate: 0.005,
            batch_size: 32,
            seed: 0,
            l2_reg: 0.0,
        }
    }
}

impl MlpConfig {
    fn validate(&self) -> Result<()> {
        if self.hidden_layers.contains(&0) {
            return Err(Error::Parameter("hidden layer widths must be positive".into()));
        }
        if !(self.learning_rate > 0.0) || !self.learning_rate.is_finite() {
            return Err(Error::Parameter(format!("learning_rate {} must be positive", self.learning_rate)));
        }
        if self.batch_size == 0 {
            return Err(Error::Parameter("batch_size must be positive".into()));
        }
        if !(self.l2_reg >= 0.0) {
            return Err(Error::Parameter(format!("l2_reg {} must be nonnegative", self.l2_reg)));
        }
        Ok(())
    }
}

/// Fully connected layer: `out = W in + b`, `W` is `outputs x inputs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    /// Weights.
    pub weights: Matrix,
    /// Biases.
    pub bias: Vec<f64>,
}

/// Trained network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    /// Settings used.
    pub config: MlpConfig,
    /// Hidden layers followed by the single-unit output layer.
    pub layers: Vec<Layer>,
    /// Mean training loss (with penalty) after each epoch.
    pub loss_trace: Vec<f64>,
}

/// Per-layer pre-activations and activations for one input.
struct Trace {
    z: Vec<Vec<f64>>,
    a: Vec<Vec<f64>>,
}

impl MlpModel {
    /// Fresh network: He-uniform weights for rectifier layers,
    /// Xavier-uniform for tanh layers and the output; zero biases.
    pub fn init(n_inputs: usize, cfg: &MlpConfig) -> Result<Self> {
        cfg.validate()?;
        let mut rng = rng::seeded(cfg.seed);
        let mut widths = vec![n_inputs];
        widths.extend(&cfg.hidden_layers);
        widths.push(1);
        let n_hidden = cfg.hidden_layers.len();
        let layers = widths
            .windows(2)
            .enumerate()
            .map(|(l, w)| {
                let (fan_in, fan_out) = (w[0] as f64, w[1] as f64);
                let limit = if l < n_hidden && cfg.activation == Activation::Rectifier {
                    (6.0 / fan_in).sqrt()
                } else {
                    (6.0 / (fan_in + fan_out)).sqrt()
                };
                let data = (0..w[0] * w[1]).map(|_| rng.gen_range(-limit..limit)).collect();
                Layer { weights: Matrix::from_vec(w[1], w[0], data).expect("shape"), bias: vec![0.0; w[1]] }
            })
            .collect();
        Ok(Self { config: cfg.clone(), layers, loss_trace: Vec::new() })
    }

    fn forward(&self, x: &[f64]) -> Trace {
        let last = self.layers.len() - 1;
        let mut z = Vec::with_capacity(self.layers.len());
        let mut a = vec![x.to_vec()];
        for (l, layer) in self.layers.iter().enumerate() {
            let input = &a[l];
            let zl: Vec<f64> = (0..layer.bias.len()).map(|o| dot(layer.weights.row(o), input) + layer.bias[o]).collect();
            let al = if l == last { zl.clone() } else { zl.iter().map(|&v| self.config.activation.apply(v)).collect() };
            z.push(zl);
            a.push(al);
        }
        Trace { z, a }
    }

    /// Output logit.
    pub fn logit(&self, x: &[f64]) -> f64 {
        self.forward(x).z.last().expect("output layer")[0]
    }

    /// Probability of class 1.
    pub fn score(&self, x: &[f64]) -> f64 {
        sigmoid(self.logit(x))
    }

    /// Number of trainable parameters.
    pub fn n_params(&self) -> usize {
        self.layers.iter().map(|l| l.weights.as_slice().len() + l.bias.len()).sum()
    }

    fn penalty(&self) -> f64 {
        let sq: f64 = self.layers.iter().map(|l| dot(l.weights.as_slice(), l.weights.as_slice())).sum();
        0.5 * self.config.l2_reg * sq
    }

    /// Mean log-loss over `rows` plus the weight penalty.
    pub fn loss(&self, x: &Matrix, y: &[u8], rows: &[usize]) -> f64 {
        let total: f64 = rows.iter().map(|&i| log_loss(self.logit(x.row(i)), y[i])).sum();
        total / rows.len() as f64 + self.penalty()
    }

    /// Gradient of [`MlpModel::loss`] with the same layout as the layers.
    pub fn gradient(&self, x: &Matrix, y: &[u8], rows: &[usize]) -> Vec<Layer> {
        let mut grads: Vec<Layer> = self
            .layers
            .iter()
            .map(|l| Layer { weights: Matrix::zeros(l.weights.rows(), l.weights.cols()), bias: vec![0.0; l.bias.len()] })
            .collect();
        let inv = 1.0 / rows.len() as f64;
        let last = self.layers.len() - 1;
        for &i in rows {
            let t = self.forward(x.row(i));
            let mut delta = vec![sigmoid(t.z[last][0]) - f64::from(y[i])];
            for l in (0..=last).rev() {
                let input = &t.a[l];
                for (o, &dv) in delta.iter().enumerate() {
                    grads[l].bias[o] += dv * inv;
                    for (g, &v) in grads[l].weights.row_mut(o).iter_mut().zip(input) {
                        *g += dv * v * inv;
                    }
                }
                if l > 0 {
                    let w = &self.layers[l].weights;
                    delta = (0..w.cols())
                        .map(|k| {
                            let back: f64 = delta.iter().enumerate().map(|(o, dv)| dv * w[(o, k)]).sum();
                            back * self.config.activation.derivative(t.z[l - 1][k], t.a[l][k])
                        })
                        .collect();
                }
            }
        }
        for (g, layer) in grads.iter_mut().zip(&self.layers) {
            for (gw, w) in g.weights.as_mut_slice().iter_mut().zip(layer.weights.as_slice()) {
                *gw += self.config.l2_reg * w;
            }
        }
        grads
    }

    fn params_mut(&mut self) -> impl Iterator<Item = &mut f64> + '_ {
        self.layers.iter_mut().flat_map(|l| l.weights.as_mut_slice().iter_mut().chain(l.bias.iter_mut()))
    }

    fn all_finite(&self) -> bool {
        self.layers.iter().all(|l| l.weights.as_slice().iter().chain(&l.bias).all(|v| v.is_finite()))
    }

    /// Rectifier on/off pattern of every hidden unit for every row.
    fn activation_pattern(&self, x: &Matrix, rows: &[usize]) -> Vec<bool> {
        let hidden = self.layers.len() - 1;
        rows.iter().flat_map(|&i| self.forward(x.row(i)).z.into_iter().take(hidden).flatten().map(|z| z > 0.0)).collect()
    }
}

fn log_loss(z: f64, y: u8) -> f64 {
    z.max(0.0) + (-z.abs()).exp().ln_1p() - f64::from(y) * z
}

fn sgd_step(model: &mut MlpModel, x: &Matrix, y: &[u8], batch: &[usize]) {
    let grads = model.gradient(x, y, batch);
    let lr = model.config.learning_rate;
    let flat: Vec<f64> =
        grads.iter().flat_map(|g| g.weights.as_slice().iter().chain(&g.bias).copied()).collect();
    for (p, g) in model.params_mut().zip(flat) {
        *p -= lr * g;
    }
}

fn train(mut model: MlpModel, x: &Matrix, y: &[u8], rng: &mut Rng) -> Result<MlpModel> {
    let n = x.rows();
    let all: Vec<usize> = (0..n).collect();
    let mut order = all.clone();
    let mut last_finite = None;
    for epoch in 0..model.config.epochs {
        order.shuffle(rng);
        for batch in order.chunks(model.config.batch_size) {
            sgd_step(&mut model, x, y, batch);
        }
        let loss = model.loss(x, y, &all);
        if !loss.is_finite() || !model.all_finite() {
            return Err(Error::Diverged { epoch, last_finite });
        }
        model.loss_trace.push(loss);
        last_finite = Some(epoch);
    }
    Ok(model)
}

/// Trains a network from a seeded initialization.
pub fn fit_mlp(train_set: &Dataset, cfg: &MlpConfig) -> Result<MlpModel> {
    let x = train_set.features();
    if train_set.n_rows() == 0 || x.cols() == 0 {
        return Err(Error::Parameter("empty training set".into()));
    }
    if x.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::Parameter("features must be finite".into()));
    }
    if train_set.class_counts().contains(&0) {
        return Err(Error::Parameter("both classes are required".into()));
    }
    warn_if_unscaled(x, "network training");
    let model = MlpModel::init(x.cols(), cfg)?;
    let mut rng = rng::stream(cfg.seed, 1);
    train(model, x, train_set.labels(), &mut rng)
}

/// Outcome of a finite-difference gradient check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GradientCheck {
    /// Largest `|analytic - numeric| / max(|analytic| + |numeric|, 1e-8)`.
    pub max_relative_error: f64,
    /// Parameters compared.
    pub checked: usize,
    /// Parameters skipped because a perturbation flipped a rectifier.
    pub skipped: usize,
}

/// Compares backpropagation with central differences for every parameter.
pub fn gradient_check(model: &MlpModel, batch: &Dataset, epsilon: f64) -> Result<GradientCheck> {
    if batch.n_rows() == 0 || batch.n_rows() > 16 {
        return Err(Error::Parameter(format!("gradient check takes 1..=16 rows, got {}", batch.n_rows())));
    }
    if !(epsilon > 0.0) {
        return Err(Error::Parameter("epsilon must be positive".into()));
    }
    let x = batch.features();
    let y = batch.labels();
    let rows: Vec<usize> = (0..batch.n_rows()).collect();
    let analytic: Vec<f64> = model
        .gradient(x, y, &rows)
        .iter()
        .flat_map(|g| g.weights.as_slice().iter().chain(&g.bias).copied().collect::<Vec<_>>())
        .collect();
    let rectifier = model.config.activation == Activation::Rectifier;
    let base_pattern = if rectifier { model.activation_pattern(x, &rows) } else { Vec::new() };
    let mut probe = model.clone();
    let mut out = GradientCheck { max_relative_error: 0.0, checked: 0, skipped: 0 };
    for (k, &a) in analytic.iter().enumerate() {
        let original = *probe.params_mut().nth(k).expect("index");
        let eval = |delta: f64, probe: &mut MlpModel| {
            *probe.params_mut().nth(k).expect("index") = original + delta;
            let kink = rectifier && probe.activation_pattern(x, &rows) != base_pattern;
            (probe.loss(x, y, &rows), kink)
        };
        let (plus, kink_p) = eval(epsilon, &mut probe);
        let (minus, kink_m) = eval(-epsilon, &mut probe);
        *probe.params_mut().nth(k).expect("index") = original;
        if kink_p || kink_m {
            out.skipped += 1;
            continue;
        }
        let numeric = (plus - minus) / (2.0 * epsilon);
        let rel = (a - numeric).abs() / (a.abs() + numeric.abs()).max(1e-8);
        out.max_relative_error = out.max_relative_error.max(rel);
        out.checked += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> (Matrix, Vec<u8>) {
        let x = Matrix::from_rows(&[[0.5, -1.0], [1.5, 0.2], [-0.3, 0.8], [0.0, 0.0]]).unwrap();
        (x, vec![1, 0, 1, 0])
    }

    #[test]
    fn zero_network_gradient_is_closed_form() {
        let cfg = MlpConfig { hidden_layers: vec![3], ..MlpConfig::default() };
        let mut m = MlpModel::init(2, &cfg).unwrap();
        m.params_mut().for_each(|p| *p = 0.0);
        let (x, y) = tiny();
        let g = m.gradient(&x, &y, &[0, 1, 2, 3]);
        // output p = 1/2 everywhere, hidden activations 0
        let expected: f64 = y.iter().map(|&t| 0.5 - f64::from(t)).sum::<f64>() / 4.0;
        assert!((g[1].bias[0] - expected).abs() < 1e-15);
        assert!(g[1].weights.as_slice().iter().all(|&v| v == 0.0));
        assert!(g[0].weights.as_slice().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn layer_shapes_chain() {
        let m = MlpModel::init(7, &MlpConfig::default()).unwrap();
        let shapes: Vec<(usize, usize)> = m.layers.iter().map(|l| (l.weights.rows(), l.weights.cols())).collect();
        assert_eq!(shapes, vec![(50, 7), (50, 50), (1, 50)]);
        assert_eq!(m.n_params(), 50 * 7 + 50 + 50 * 50 + 50 + 50 + 1);
    }

    #[test]
    fn rejects_bad_config() {
        let cfg = MlpConfig { learning_rate: 0.0, ..MlpConfig::default() };
        assert!(MlpModel::init(3, &cfg).is_err());
        let cfg = MlpConfig { hidden_layers: vec![4, 0], ..MlpConfig::default() };
        assert!(MlpModel::init(3, &cfg).is_err());
    }
}
