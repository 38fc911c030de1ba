use alloc::format;
use alloc::vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::{check_finite, check_train, FittedModel, ModelParams};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Gaussian naive Bayes hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NaiveBayesConfig {
    /// Added to every variance, as a fraction of the largest feature variance.
    pub var_smoothing: f64,
}

impl Default for NaiveBayesConfig {
    fn default() -> Self {
        Self { var_smoothing: 1e-9 }
    }
}

/// Per-class, per-feature Gaussians and class priors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaiveBayesModel {
    /// Settings used.
    pub config: NaiveBayesConfig,
    /// Class frequencies in the training set.
    pub priors: [f64; 2],
    /// `2 x d` class means.
    pub means: Matrix,
    /// `2 x d` smoothed class variances.
    pub variances: Matrix,
}

impl NaiveBayesModel {
    /// Joint log density `ln P(c) + sum_j ln N(x_j; mu_cj, var_cj)` per class.
    pub fn joint_log_likelihood(&self, x: &[f64]) -> [f64; 2] {
        let mut out = [0.0; 2];
        for (c, o) in out.iter_mut().enumerate() {
            let mut s = self.priors[c].ln();
            for (j, &v) in x.iter().enumerate() {
                let var = self.variances[(c, j)];
                let diff = v - self.means[(c, j)];
                s -= 0.5 * ((2.0 * core::f64::consts::PI * var).ln() + diff * diff / var);
            }
            *o = s;
        }
        out
    }

    /// Posterior probability of class 1.
    pub fn score(&self, x: &[f64]) -> f64 {
        let [l0, l1] = self.joint_log_likelihood(x);
        1.0 / (1.0 + (l0 - l1).exp())
    }
}

/// Gaussian maximum-likelihood fit per class plus variance smoothing.
pub fn fit_gaussian_nb(train: &Dataset, cfg: &NaiveBayesConfig) -> Result<FittedModel> {
    check_train(train)?;
    let (x, y) = (train.features(), train.labels());
    check_finite(x)?;
    if !(cfg.var_smoothing >= 0.0) {
        return Err(Error::Parameter(format!("var_smoothing {} must be nonnegative", cfg.var_smoothing)));
    }
    let counts = train.class_counts();
    if counts.contains(&0) {
        return Err(Error::Parameter(format!("both classes are required, got counts {counts:?}")));
    }
    let d = x.cols();
    let cov = x.covariance();
    let max_var = (0..d).map(|j| cov[(j, j)]).fold(0.0, f64::max);
    let eps = cfg.var_smoothing * max_var;
    let mut means = Matrix::zeros(2, d);
    let mut variances = Matrix::zeros(2, d);
    for (row, &c) in x.iter_rows().zip(y) {
        for (m, v) in means.row_mut(c as usize).iter_mut().zip(row) {
            *m += v;
        }
    }
    for c in 0..2 {
        let inv = 1.0 / counts[c] as f64;
        means.row_mut(c).iter_mut().for_each(|m| *m *= inv);
    }
    for (row, &c) in x.iter_rows().zip(y) {
        let c = c as usize;
        for j in 0..d {
            let diff = row[j] - means[(c, j)];
            variances[(c, j)] += diff * diff;
        }
    }
    let mut degenerate = vec![false; d];
    for c in 0..2 {
        for j in 0..d {
            let v = variances[(c, j)] / counts[c] as f64 + eps;
            degenerate[j] |= v <= 0.0;
            variances[(c, j)] = v;
        }
    }
    if let Some(j) = degenerate.iter().position(|&b| b) {
        return Err(Error::Numerical(format!("zero variance in column {j} after smoothing")));
    }
    let n = x.rows() as f64;
    let priors = [counts[0] as f64 / n, counts[1] as f64 / n];
    let model = NaiveBayesModel { config: *cfg, priors, means, variances };
    Ok(FittedModel::new(train, ModelParams::NaiveBayes(model)))
}
