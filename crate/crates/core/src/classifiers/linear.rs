use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::{check_finite, check_train, sigmoid, warn_if_unscaled, FittedModel, ModelParams};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::linalg::{cholesky, cholesky_solve, dot, Matrix};

/// Linear predictor `intercept + coefficients . x` under a logistic link.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearModel {
    /// One weight per feature.
    pub coefficients: Vec<f64>,
    /// Unpenalized intercept.
    pub intercept: f64,
    /// Solver iterations run.
    pub iterations: usize,
    /// Whether the stopping rule was met.
    pub converged: bool,
}

impl LinearModel {
    /// Linear predictor.
    pub fn eta(&self, x: &[f64]) -> f64 {
        self.intercept + dot(&self.coefficients, x)
    }

    /// Probability of class 1.
    pub fn score(&self, x: &[f64]) -> f64 {
        sigmoid(self.eta(x))
    }
}

/// Penalized logistic regression settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogisticConfig {
    /// Ridge penalty on the coefficients (not the intercept).
    pub l2_reg: f64,
    /// Newton iteration cap.
    pub max_iter: usize,
    /// Stop when the gradient max-norm drops below this.
    pub tol: f64,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        Self { l2_reg: 1.0, max_iter: 100, tol: 1e-6 }
    }
}

/// Log-likelihood minus `l2 / 2 * |w|^2`; `beta[0]` is the intercept.
fn penalized_log_likelihood(x: &Matrix, y: &[u8], beta: &[f64], l2: f64) -> f64 {
    let mut ll = 0.0;
    for (row, &t) in x.iter_rows().zip(y) {
        let eta = beta[0] + dot(&beta[1..], row);
        ll += f64::from(t) * eta - (eta.max(0.0) + (-eta.abs()).exp().ln_1p());
    }
    ll - 0.5 * l2 * dot(&beta[1..], &beta[1..])
}

/// Gradient and negated Hessian of the penalized log-likelihood.
fn newton_system(x: &Matrix, y: &[u8], beta: &[f64], l2: f64) -> (Vec<f64>, Matrix) {
    let p = beta.len();
    let mut grad = vec![0.0; p];
    let mut hess = Matrix::zeros(p, p);
    let mut z = vec![1.0; p];
    for (row, &t) in x.iter_rows().zip(y) {
        z[1..].copy_from_slice(row);
        let mu = sigmoid(dot(beta, &z));
        let r = f64::from(t) - mu;
        let w = mu * (1.0 - mu);
        for a in 0..p {
            grad[a] += r * z[a];
            for b in a..p {
                hess[(a, b)] += w * z[a] * z[b];
            }
        }
    }
    for a in 0..p {
        if a > 0 {
            grad[a] -= l2 * beta[a];
            hess[(a, a)] += l2;
        }
        for b in 0..a {
            hess[(a, b)] = hess[(b, a)];
        }
    }
    (grad, hess)
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// Solves `h d = g`, adding a small ridge when `h` is numerically singular.
fn newton_direction(h: &Matrix, g: &[f64]) -> Result<Vec<f64>> {
    if let Ok(l) = cholesky(h) {
        return Ok(cholesky_solve(&l, g));
    }
    let p = h.rows();
    let scale = (0..p).map(|i| h[(i, i)]).fold(0.0, f64::max).max(1.0);
    let mut jittered = h.clone();
    for i in 0..p {
        jittered[(i, i)] += 1e-10 * scale;
    }
    Ok(cholesky_solve(&cholesky(&jittered)?, g))
}

pub(crate) fn logistic_newton(x: &Matrix, y: &[u8], cfg: &LogisticConfig) -> Result<(LinearModel, Vec<f64>)> {
    let p = x.cols() + 1;
    let mut beta = vec![0.0; p];
    let mut objective = penalized_log_likelihood(x, y, &beta, cfg.l2_reg);
    let mut converged = false;
    let mut iterations = 0;
    let (mut grad, mut hess) = newton_system(x, y, &beta, cfg.l2_reg);
    while iterations < cfg.max_iter {
        if max_abs(&grad) < cfg.tol {
            converged = true;
            break;
        }
        iterations += 1;
        let step = newton_direction(&hess, &grad)?;
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..50 {
            let trial: Vec<f64> = beta.iter().zip(&step).map(|(b, s)| b + t * s).collect();
            let obj = penalized_log_likelihood(x, y, &trial, cfg.l2_reg);
            if obj >= objective {
                beta = trial;
                objective = obj;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        (grad, hess) = newton_system(x, y, &beta, cfg.l2_reg);
        if !accepted {
            break;
        }
    }
    if !converged && max_abs(&grad) < cfg.tol {
        converged = true;
    }
    if !converged {
        log::warn!(
            "logistic regression stopped after {iterations} iterations with gradient norm {:e} (separable data?)",
            max_abs(&grad)
        );
    }
    let model = LinearModel { coefficients: beta[1..].to_vec(), intercept: beta[0], iterations, converged };
    Ok((model, grad))
}

/// Maximizes the ridge-penalized log-likelihood by damped Newton steps.
pub fn fit_logistic(train: &Dataset, cfg: &LogisticConfig) -> Result<FittedModel> {
    check_train(train)?;
    check_finite(train.features())?;
    if !(cfg.l2_reg >= 0.0) || !(cfg.tol > 0.0) {
        return Err(Error::Parameter(format!("l2_reg {} and tol {} must be >= 0 and > 0", cfg.l2_reg, cfg.tol)));
    }
    warn_if_unscaled(train.features(), "logistic regression");
    let (model, _) = logistic_newton(train.features(), train.labels(), cfg)?;
    Ok(FittedModel::new(train, ModelParams::Logistic(model)))
}

/// Binomial GLM settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GlmConfig {
    /// IRLS iteration cap.
    pub max_iter: usize,
    /// Relative deviance change that counts as converged.
    pub tol: f64,
}

impl Default for GlmConfig {
    fn default() -> Self {
        Self { max_iter: 25, tol: 1e-8 }
    }
}

/// Fitted binomial GLM.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlmModel {
    /// Settings used.
    pub config: GlmConfig,
    /// Coefficients and intercept.
    pub linear: LinearModel,
    /// Residual deviance `-2 log L`.
    pub deviance: f64,
    /// Deviance of the intercept-only model.
    pub null_deviance: f64,
}

/// `-2 * sum [y ln mu + (1 - y) ln(1 - mu)]` for 0/1 responses.
pub(crate) fn binomial_deviance(y: &[u8], mu: &[f64]) -> f64 {
    -2.0 * y
        .iter()
        .zip(mu)
        .map(|(&t, &m)| if t == 1 { m.ln() } else { (1.0 - m).ln() })
        .sum::<f64>()
}

fn null_deviance(y: &[u8]) -> f64 {
    let n = y.len() as f64;
    let n1 = y.iter().filter(|&&t| t == 1).count() as f64;
    let n0 = n - n1;
    let term = |k: f64| if k > 0.0 { k * (k / n).ln() } else { 0.0 };
    -2.0 * (term(n1) + term(n0))
}

/// Iteratively reweighted least squares for the binomial family with the
/// logit link.
pub fn fit_glm(train: &Dataset, cfg: &GlmConfig) -> Result<FittedModel> {
    check_train(train)?;
    let (x, y) = (train.features(), train.labels());
    check_finite(x)?;
    if cfg.max_iter == 0 || !(cfg.tol > 0.0) {
        return Err(Error::Parameter("max_iter and tol must be positive".into()));
    }
    let (n, p) = (x.rows(), x.cols() + 1);
    let mut mu: Vec<f64> = y.iter().map(|&t| (f64::from(t) + 0.5) / 2.0).collect();
    let mut eta: Vec<f64> = mu.iter().map(|m| (m / (1.0 - m)).ln()).collect();
    let mut dev = binomial_deviance(y, &mu);
    let mut beta = vec![0.0; p];
    let mut converged = false;
    let mut iterations = 0;
    let mut z = vec![1.0; p];
    while iterations < cfg.max_iter {
        iterations += 1;
        let mut xtwx = Matrix::zeros(p, p);
        let mut xtwz = vec![0.0; p];
        for i in 0..n {
            let w = (mu[i] * (1.0 - mu[i])).max(1e-300);
            let work = eta[i] + (f64::from(y[i]) - mu[i]) / w;
            z[1..].copy_from_slice(x.row(i));
            for a in 0..p {
                xtwz[a] += w * z[a] * work;
                for b in a..p {
                    xtwx[(a, b)] += w * z[a] * z[b];
                }
            }
        }
        for a in 0..p {
            for b in 0..a {
                xtwx[(a, b)] = xtwx[(b, a)];
            }
        }
        beta = newton_direction(&xtwx, &xtwz)?;
        for i in 0..n {
            z[1..].copy_from_slice(x.row(i));
            eta[i] = dot(&beta, &z);
            mu[i] = sigmoid(eta[i]).clamp(f64::EPSILON, 1.0 - f64::EPSILON);
        }
        let new_dev = binomial_deviance(y, &mu);
        let change = (new_dev - dev).abs() / (new_dev.abs() + 0.1);
        dev = new_dev;
        if change < cfg.tol {
            converged = true;
            break;
        }
    }
    if !converged {
        log::warn!("GLM did not converge in {} IRLS iterations; returning the last iterate", cfg.max_iter);
    }
    let linear = LinearModel { coefficients: beta[1..].to_vec(), intercept: beta[0], iterations, converged };
    let model = GlmModel { config: *cfg, linear, deviance: dev, null_deviance: null_deviance(y) };
    Ok(FittedModel::new(train, ModelParams::Glm(model)))
}
