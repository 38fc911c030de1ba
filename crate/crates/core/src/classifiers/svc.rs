use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::{check_finite, check_train, FittedModel, ModelParams};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::linalg::{dot, squared_distance, Matrix};

/// Kernel function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kernel {
    /// `x . z`.
    Linear,
    /// `exp(-gamma |x - z|^2)`.
    Rbf,
}

/// SVC hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SvcConfig {
    /// Box constraint.
    pub c: f64,
    /// Kernel.
    pub kernel: Kernel,
    /// RBF width; `None` means `1 / (d * var(X))` over all cells.
    pub gamma: Option<f64>,
    /// Stop when the maximal KKT violation is below this.
    pub tol: f64,
    /// Cap on pair updates.
    pub max_iter: usize,
}

impl Default for SvcConfig {
    fn default() -> Self {
        Self { c: 1.0, kernel: Kernel::Rbf, gamma: None, tol: 1e-3, max_iter: 1_000_000 }
    }
}

/// Support vectors and their dual weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvcModel {
    /// Settings used.
    pub config: SvcConfig,
    /// Resolved RBF width (unused for the linear kernel).
    pub gamma: f64,
    /// Training rows with nonzero dual variable.
    pub support_vectors: Matrix,
    /// Dual variables of the support vectors, each in `[0, c]`.
    pub alphas: Vec<f64>,
    /// Support-vector labels in `{-1, +1}`.
    pub signs: Vec<f64>,
    /// Intercept.
    pub bias: f64,
    /// `sum a - 1/2 sum_ij a_i a_j y_i y_j K_ij` at exit.
    pub dual_objective: f64,
    /// Pair updates performed.
    pub iterations: usize,
    /// Whether the KKT tolerance was met.
    pub converged: bool,
}

impl SvcModel {
    /// `sum_i a_i y_i K(sv_i, x) + b`.
    pub fn decision(&self, x: &[f64]) -> f64 {
        let k = |sv: &[f64]| kernel(self.config.kernel, self.gamma, sv, x);
        self.support_vectors.iter_rows().zip(self.alphas.iter().zip(&self.signs)).map(|(sv, (a, y))| a * y * k(sv)).sum::<f64>()
            + self.bias
    }
}

pub(crate) fn kernel(kind: Kernel, gamma: f64, a: &[f64], b: &[f64]) -> f64 {
    match kind {
        Kernel::Linear => dot(a, b),
        Kernel::Rbf => (-gamma * squared_distance(a, b)).exp(),
    }
}

/// `1 / (d * var)` with the population variance of every cell.
pub fn scale_gamma(x: &Matrix) -> f64 {
    let v = x.as_slice();
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|a| (a - mean) * (a - mean)).sum::<f64>() / n;
    if var > 0.0 {
        1.0 / (x.cols() as f64 * var)
    } else {
        1.0
    }
}

/// Dual solution of `min 1/2 a'Qa - e'a` s.t. `0 <= a <= c`, `y'a = 0`.
#[derive(Debug, Clone, PartialEq)]
pub(crate) struct DualSolution {
    pub alpha: Vec<f64>,
    pub rho: f64,
    pub iterations: usize,
    pub converged: bool,
    pub objective: f64,
}

const TAU: f64 = 1e-12;

/// SMO with maximal-violating-pair working sets on a precomputed kernel.
pub(crate) fn solve_dual(k: &Matrix, y: &[f64], c: f64, tol: f64, max_iter: usize) -> DualSolution {
    let n = y.len();
    let q = |i: usize, j: usize| y[i] * y[j] * k[(i, j)];
    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let up = |a: f64, yt: f64| (yt > 0.0 && a < c) || (yt < 0.0 && a > 0.0);
    let low = |a: f64, yt: f64| (yt > 0.0 && a > 0.0) || (yt < 0.0 && a < c);
    let mut iterations = 0;
    let mut converged = false;
    loop {
        let (mut i, mut gmax) = (usize::MAX, f64::NEG_INFINITY);
        let (mut j, mut gmin) = (usize::MAX, f64::INFINITY);
        for t in 0..n {
            let v = -y[t] * grad[t];
            if up(alpha[t], y[t]) && v > gmax {
                (i, gmax) = (t, v);
            }
            if low(alpha[t], y[t]) && v < gmin {
                (j, gmin) = (t, v);
            }
        }
        if i == usize::MAX || j == usize::MAX || gmax - gmin < tol {
            converged = true;
            break;
        }
        if iterations == max_iter {
            break;
        }
        iterations += 1;
        let (old_i, old_j) = (alpha[i], alpha[j]);
        let (mut ai, mut aj) = (old_i, old_j);
        if y[i] != y[j] {
            let mut quad = q(i, i) + q(j, j) + 2.0 * q(i, j);
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = ai - aj;
            ai += delta;
            aj += delta;
            if diff > 0.0 {
                if aj < 0.0 {
                    aj = 0.0;
                    ai = diff;
                }
            } else if ai < 0.0 {
                ai = 0.0;
                aj = -diff;
            }
            if diff > 0.0 {
                if ai > c {
                    ai = c;
                    aj = c - diff;
                }
            } else if aj > c {
                aj = c;
                ai = c + diff;
            }
        } else {
            let mut quad = q(i, i) + q(j, j) - 2.0 * q(i, j);
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (grad[i] - grad[j]) / quad;
            let sum = ai + aj;
            ai -= delta;
            aj += delta;
            if sum > c {
                if ai > c {
                    ai = c;
                    aj = sum - c;
                }
            } else if aj < 0.0 {
                aj = 0.0;
                ai = sum;
            }
            if sum > c {
                if aj > c {
                    aj = c;
                    ai = sum - c;
                }
            } else if ai < 0.0 {
                ai = 0.0;
                aj = sum;
            }
        }
        alpha[i] = ai;
        alpha[j] = aj;
        let (di, dj) = (ai - old_i, aj - old_j);
        for t in 0..n {
            grad[t] += q(t, i) * di + q(t, j) * dj;
        }
    }
    // intercept from free variables, else the midpoint of the feasible range
    let (mut ub, mut lb, mut sum, mut free) = (f64::INFINITY, f64::NEG_INFINITY, 0.0, 0usize);
    for t in 0..n {
        let yg = y[t] * grad[t];
        if alpha[t] >= c {
            if y[t] < 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else if alpha[t] <= 0.0 {
            if y[t] > 0.0 {
                ub = ub.min(yg);
            } else {
                lb = lb.max(yg);
            }
        } else {
            free += 1;
            sum += yg;
        }
    }
    let rho = if free > 0 { sum / free as f64 } else { 0.5 * (ub + lb) };
    // dual objective: -(1/2 a'Qa - e'a) = -1/2 sum a_t (G_t - 1)
    let objective = -0.5 * alpha.iter().zip(&grad).map(|(a, g)| a * (g - 1.0)).sum::<f64>();
    DualSolution { alpha, rho, iterations, converged, objective }
}

/// Soft-margin kernel SVC trained by SMO.
pub fn fit_svc(train: &Dataset, cfg: &SvcConfig) -> Result<FittedModel> {
    check_train(train)?;
    let x = train.features();
    check_finite(x)?;
    if !(cfg.c > 0.0) || !(cfg.tol > 0.0) {
        return Err(Error::Parameter(format!("c {} and tol {} must be positive", cfg.c, cfg.tol)));
    }
    if cfg.gamma.is_some_and(|g| !(g > 0.0)) {
        return Err(Error::Parameter("gamma must be positive".into()));
    }
    let counts = train.class_counts();
    if counts.contains(&0) {
        return Err(Error::Parameter(format!("both classes are required, got counts {counts:?}")));
    }
    let gamma = cfg.gamma.unwrap_or_else(|| scale_gamma(x));
    let n = x.rows();
    let y: Vec<f64> = train.labels().iter().map(|&t| if t == 1 { 1.0 } else { -1.0 }).collect();
    let mut gram = Matrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = kernel(cfg.kernel, gamma, x.row(i), x.row(j));
            gram[(i, j)] = v;
            gram[(j, i)] = v;
        }
    }
    let sol = solve_dual(&gram, &y, cfg.c, cfg.tol, cfg.max_iter);
    if !sol.converged {
        log::warn!("SVC stopped after {} updates; dual objective {}", sol.iterations, sol.objective);
    }
    let sv: Vec<usize> = (0..n).filter(|&i| sol.alpha[i] > 0.0).collect();
    let model = SvcModel {
        config: *cfg,
        gamma,
        support_vectors: x.select_rows(&sv),
        alphas: sv.iter().map(|&i| sol.alpha[i]).collect(),
        signs: sv.iter().map(|&i| y[i]).collect(),
        bias: -sol.rho,
        dual_objective: sol.objective,
        iterations: sol.iterations,
        converged: sol.converged,
    };
    Ok(FittedModel::new(train, ModelParams::Svc(model)))
}
