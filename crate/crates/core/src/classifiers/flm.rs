use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::{check_finite, check_train, FittedModel, ModelParams};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::linalg::{dot, Matrix};
use crate::rng;

/// Linear large-margin solver settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FlmConfig {
    /// Hinge-loss weight.
    pub c: f64,
    /// Stop when the projected-gradient spread within an epoch is below this.
    pub tol: f64,
    /// Epoch cap.
    pub max_epochs: usize,
    /// Train on a labelled subset, pseudo-label confident held-out rows, retrain.
    pub self_training: bool,
    /// Share of training rows treated as unlabelled in self-training mode.
    pub unlabeled_fraction: f64,
    /// Seeds the coordinate order and the unlabelled subset.
    pub seed: u64,
}

impl Default for FlmConfig {
    fn default() -> Self {
        Self { c: 1.0, tol: 1e-3, max_epochs: 1000, self_training: false, unlabeled_fraction: 0.5, seed: 0 }
    }
}

/// Linear separator with the optimization record of its last solve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlmModel {
    /// Settings used.
    pub config: FlmConfig,
    /// Feature weights.
    pub weights: Vec<f64>,
    /// Bias, learned as the weight of a constant feature.
    pub bias: f64,
    /// Dual variables of the final solve, each in `[0, c]`.
    pub alphas: Vec<f64>,
    /// `1/2 |w|^2 + c sum hinge`.
    pub primal_objective: f64,
    /// `sum a - 1/2 |w|^2`.
    pub dual_objective: f64,
    /// Epochs of the final solve.
    pub epochs: usize,
    /// Whether the tolerance was met.
    pub converged: bool,
    /// Rows pseudo-labelled in self-training mode.
    pub pseudo_labeled: usize,
}

impl FlmModel {
    /// Signed margin `w . x + b`.
    pub fn decision(&self, x: &[f64]) -> f64 {
        dot(&self.weights, x) + self.bias
    }
}

struct Solve {
    w: Vec<f64>,
    alpha: Vec<f64>,
    epochs: usize,
    converged: bool,
}

/// Dual coordinate descent for the L1-loss linear SVM on rows `rows`;
/// `w` has one extra trailing entry for the bias.
fn dual_cd(x: &Matrix, y: &[f64], rows: &[usize], cfg: &FlmConfig, seed: u64) -> Solve {
    let d = x.cols();
    let mut w = vec![0.0; d + 1];
    let mut alpha = vec![0.0; rows.len()];
    let qii: Vec<f64> = rows.iter().map(|&i| dot(x.row(i), x.row(i)) + 1.0).collect();
    let mut order: Vec<usize> = (0..rows.len()).collect();
    let mut rng = rng::seeded(seed);
    let c = cfg.c;
    let mut epochs = 0;
    let mut converged = false;
    while epochs < cfg.max_epochs {
        epochs += 1;
        order.shuffle(&mut rng);
        let (mut pg_max, mut pg_min) = (f64::NEG_INFINITY, f64::INFINITY);
        for &k in &order {
            let i = rows[k];
            let xi = x.row(i);
            let g = y[i] * (dot(&w[..d], xi) + w[d]) - 1.0;
            let pg = if alpha[k] <= 0.0 {
                g.min(0.0)
            } else if alpha[k] >= c {
                g.max(0.0)
            } else {
                g
            };
            pg_max = pg_max.max(pg);
            pg_min = pg_min.min(pg);
            if pg != 0.0 {
                let old = alpha[k];
                alpha[k] = (old - g / qii[k]).clamp(0.0, c);
                let step = (alpha[k] - old) * y[i];
                for (wj, v) in w[..d].iter_mut().zip(xi) {
                    *wj += step * v;
                }
                w[d] += step;
            }
        }
        if pg_max - pg_min < cfg.tol {
            converged = true;
            break;
        }
    }
    Solve { w, alpha, epochs, converged }
}

fn objectives(x: &Matrix, y: &[f64], rows: &[usize], s: &Solve, c: f64) -> (f64, f64) {
    let d = x.cols();
    let norm2 = dot(&s.w, &s.w);
    let hinge: f64 = rows.iter().map(|&i| (1.0 - y[i] * (dot(&s.w[..d], x.row(i)) + s.w[d])).max(0.0)).sum();
    (0.5 * norm2 + c * hinge, s.alpha.iter().sum::<f64>() - 0.5 * norm2)
}

/// Linear hinge-loss classifier trained by dual coordinate descent, with an
/// optional one-shot self-training pass.
pub fn fit_fast_large_margin(train: &Dataset, cfg: &FlmConfig) -> Result<FittedModel> {
    check_train(train)?;
    let x = train.features();
    check_finite(x)?;
    if !(cfg.c > 0.0) || !(cfg.tol > 0.0) || cfg.max_epochs == 0 {
        return Err(Error::Parameter(format!("c {}, tol {} and max_epochs must be positive", cfg.c, cfg.tol)));
    }
    if !(0.0..1.0).contains(&cfg.unlabeled_fraction) {
        return Err(Error::Parameter(format!("unlabeled_fraction {} not in [0, 1)", cfg.unlabeled_fraction)));
    }
    let n = x.rows();
    let d = x.cols();
    let mut y: Vec<f64> = train.labels().iter().map(|&t| if t == 1 { 1.0 } else { -1.0 }).collect();
    let mut rows: Vec<usize> = (0..n).collect();
    let mut pseudo_labeled = 0;
    if cfg.self_training {
        let mut perm = rows.clone();
        perm.shuffle(&mut rng::stream(cfg.seed, 1));
        let n_unlabeled = ((n as f64) * cfg.unlabeled_fraction).round() as usize;
        let (unlabeled, labeled) = perm.split_at(n_unlabeled.min(n - 1));
        let mut labeled = labeled.to_vec();
        labeled.sort_unstable();
        let first = dual_cd(x, &y, &labeled, cfg, cfg.seed);
        if !unlabeled.is_empty() {
            let margins: Vec<f64> = unlabeled.iter().map(|&i| dot(&first.w[..d], x.row(i)) + first.w[d]).collect();
            let mut mags: Vec<f64> = margins.iter().map(|m| m.abs()).collect();
            mags.sort_by(f64::total_cmp);
            let cut = mags[((mags.len() as f64 * 0.9).ceil() as usize).clamp(1, mags.len()) - 1];
            for (&i, &m) in unlabeled.iter().zip(&margins) {
                if m.abs() > cut {
                    y[i] = if m >= 0.0 { 1.0 } else { -1.0 };
                    labeled.push(i);
                    pseudo_labeled += 1;
                }
            }
            labeled.sort_unstable();
        }
        rows = labeled;
    }
    let solve = dual_cd(x, &y, &rows, cfg, cfg.seed);
    let (primal, dual) = objectives(x, &y, &rows, &solve, cfg.c);
    if primal - dual > 1e-2 {
        log::warn!("fast large margin: duality gap {} after {} epochs", primal - dual, solve.epochs);
    }
    let model = FlmModel {
        config: *cfg,
        weights: solve.w[..d].to_vec(),
        bias: solve.w[d],
        alphas: solve.alpha,
        primal_objective: primal,
        dual_objective: dual,
        epochs: solve.epochs,
        converged: solve.converged,
        pseudo_labeled,
    };
    Ok(FittedModel::new(train, ModelParams::FastLargeMargin(model)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separable_line_has_no_hinge_loss() {
        let x = Matrix::from_rows(&[[-2.0], [-1.0], [1.0], [2.0]]).unwrap();
        let y = [-1.0, -1.0, 1.0, 1.0];
        let cfg = FlmConfig { c: 10.0, tol: 1e-8, ..FlmConfig::default() };
        let s = dual_cd(&x, &y, &[0, 1, 2, 3], &cfg, 3);
        assert!(s.converged);
        for i in 0..4 {
            assert!(y[i] * (s.w[0] * x[(i, 0)] + s.w[1]) >= 1.0 - 1e-6);
        }
        let (p, d) = objectives(&x, &y, &[0, 1, 2, 3], &s, cfg.c);
        assert!((p - d).abs() < 1e-6);
    }

    #[test]
    fn restricted_rows_ignore_the_rest() {
        let x = Matrix::from_rows(&[[-1.0], [1.0], [100.0]]).unwrap();
        let y = [-1.0, 1.0, -1.0];
        let cfg = FlmConfig { tol: 1e-9, ..FlmConfig::default() };
        let s = dual_cd(&x, &y, &[0, 1], &cfg, 0);
        assert_eq!(s.alpha.len(), 2);
        assert!(s.w[0] > 0.0);
    }
}
