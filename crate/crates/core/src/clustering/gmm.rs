use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::kmeans::{fit_kmeans, KmeansConfig};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::metrics::{chol_log_det, gaussian_log_density, log_sum_exp};

/// Gaussian mixture with full covariances.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GmmParams {
    /// Mixing weights (sum to 1).
    pub weights: Vec<f64>,
    /// `k x d` component means.
    pub means: Matrix,
    /// `k` symmetric positive-definite `d x d` covariances.
    pub covariances: Vec<Matrix>,
    /// Total log-likelihood after every E-step.
    pub log_likelihood_trace: Vec<f64>,
}

impl GmmParams {
    /// Free parameters: `(k - 1) + k d + k d (d + 1) / 2`.
    pub fn n_params(&self) -> usize {
        let k = self.weights.len();
        let d = self.means.cols();
        (k - 1) + k * d + k * d * (d + 1) / 2
    }

    /// Final log-likelihood, if any E-step ran.
    pub fn log_likelihood(&self) -> Option<f64> {
        self.log_likelihood_trace.last().copied()
    }
}

/// EM hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GmmConfig {
    /// Number of components.
    pub k: usize,
    /// EM iteration cap.
    pub max_iter: usize,
    /// Convergence threshold on the change of the mean per-sample log-likelihood.
    pub tol: f64,
    /// Added to every covariance diagonal.
    pub cov_floor: f64,
}

impl GmmConfig {
    /// Defaults: 200 iterations, tolerance 1e-6, floor 1e-6.
    pub fn new(k: usize) -> Self {
        Self { k, max_iter: 200, tol: 1e-6, cov_floor: 1e-6 }
    }
}

/// Fitted mixture and hard assignments.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GmmFit {
    /// Mixture parameters.
    pub params: GmmParams,
    /// Component of maximal responsibility per point.
    pub assignments: Vec<usize>,
    /// Whether the tolerance was reached before `max_iter`.
    pub converged: bool,
    /// EM iterations run.
    pub iterations: usize,
}

const MIN_WEIGHT: f64 = 1e-8;

/// Expectation-maximization for a full-covariance Gaussian mixture,
/// initialized from a k-means partition.
pub fn fit_gmm(points: &Matrix, cfg: &GmmConfig, seed: u64) -> Result<GmmFit> {
    let (n, d) = (points.rows(), points.cols());
    if d == 0 {
        return Err(Error::Parameter("points have no columns".into()));
    }
    if cfg.k == 0 || cfg.k > n {
        return Err(Error::Parameter(format!("k = {} with {n} points", cfg.k)));
    }
    if !(cfg.cov_floor >= 0.0) {
        return Err(Error::Parameter(format!("cov_floor {} must be nonnegative", cfg.cov_floor)));
    }
    match run_em(points, cfg, seed) {
        Err(Error::Numerical(msg)) => {
            log::warn!("EM restart after degenerate component: {msg}");
            run_em(points, cfg, seed.wrapping_add(0x9e37_79b9_7f4a_7c15))
        }
        other => other,
    }
}

fn run_em(points: &Matrix, cfg: &GmmConfig, seed: u64) -> Result<GmmFit> {
    let (n, k) = (points.rows(), cfg.k);
    let mut init_cfg = KmeansConfig::new(k);
    init_cfg.n_init = 1;
    let km = fit_kmeans(points, &init_cfg, seed)?;
    let mut resp = Matrix::zeros(n, k);
    for (i, &c) in km.assignments.iter().enumerate() {
        resp[(i, c)] = 1.0;
    }
    let mut params = m_step(points, &resp, cfg.cov_floor)?;
    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;
    loop {
        let ll = e_step(points, &params, &mut resp)?;
        trace.push(ll);
        if let [.., prev, last] = trace.as_slice() {
            if ((last - prev) / n as f64).abs() < cfg.tol {
                converged = true;
                break;
            }
        }
        if iterations == cfg.max_iter {
            break;
        }
        params = m_step(points, &resp, cfg.cov_floor)?;
        iterations += 1;
    }
    let assignments = (0..n)
        .map(|i| (0..k).fold(0, |b, c| if resp[(i, c)] > resp[(i, b)] { c } else { b }))
        .collect();
    params.log_likelihood_trace = trace;
    Ok(GmmFit { params, assignments, converged, iterations })
}

fn m_step(points: &Matrix, resp: &Matrix, floor: f64) -> Result<GmmParams> {
    let (n, d, k) = (points.rows(), points.cols(), resp.cols());
    let mut weights = vec![0.0; k];
    let mut means = Matrix::zeros(k, d);
    for (i, x) in points.iter_rows().enumerate() {
        for c in 0..k {
            let r = resp[(i, c)];
            weights[c] += r;
            for (m, v) in means.row_mut(c).iter_mut().zip(x) {
                *m += r * v;
            }
        }
    }
    for c in 0..k {
        if weights[c] / (n as f64) < MIN_WEIGHT {
            return Err(Error::Numerical(format!("component {c} collapsed (weight {})", weights[c] / n as f64)));
        }
        let inv = 1.0 / weights[c];
        means.row_mut(c).iter_mut().for_each(|m| *m *= inv);
    }
    let mut covariances = Vec::with_capacity(k);
    let mut diff = vec![0.0; d];
    for c in 0..k {
        let mut cov = Matrix::zeros(d, d);
        for (i, x) in points.iter_rows().enumerate() {
            let r = resp[(i, c)];
            if r == 0.0 {
                continue;
            }
            for j in 0..d {
                diff[j] = x[j] - means[(c, j)];
            }
            for a in 0..d {
                for b in a..d {
                    cov[(a, b)] += r * diff[a] * diff[b];
                }
            }
        }
        let inv = 1.0 / weights[c];
        for a in 0..d {
            for b in a..d {
                let v = cov[(a, b)] * inv + if a == b { floor } else { 0.0 };
                cov[(a, b)] = v;
                cov[(b, a)] = v;
            }
        }
        covariances.push(cov);
    }
    weights.iter_mut().for_each(|w| *w /= n as f64);
    Ok(GmmParams { weights, means, covariances, log_likelihood_trace: Vec::new() })
}

fn e_step(points: &Matrix, params: &GmmParams, resp: &mut Matrix) -> Result<f64> {
    let k = params.weights.len();
    let chols = params.covariances.iter().map(linalg::cholesky).collect::<Result<Vec<_>>>()?;
    let log_dets: Vec<f64> = chols.iter().map(chol_log_det).collect();
    let log_w: Vec<f64> = params.weights.iter().map(|w| w.ln()).collect();
    let mut terms = vec![0.0; k];
    let mut total = 0.0;
    for (i, x) in points.iter_rows().enumerate() {
        for c in 0..k {
            terms[c] = log_w[c] + gaussian_log_density(x, params.means.row(c), &chols[c], log_dets[c]);
        }
        let lse = log_sum_exp(&terms);
        for c in 0..k {
            resp[(i, c)] = (terms[c] - lse).exp();
        }
        total += lse;
    }
    if !total.is_finite() {
        return Err(Error::Numerical("non-finite log-likelihood".into()));
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_component_is_the_mle() {
        let pts = Matrix::from_rows(&[[1.0, 2.0], [2.0, 1.0], [4.0, 5.0], [0.0, -1.0], [3.0, 3.0]]).unwrap();
        let fit = fit_gmm(&pts, &GmmConfig::new(1), 0).unwrap();
        let mean = pts.column_means();
        let cov = pts.covariance();
        assert!((fit.params.weights[0] - 1.0).abs() < 1e-15);
        for j in 0..2 {
            assert!((fit.params.means[(0, j)] - mean[j]).abs() < 1e-12);
            for l in 0..2 {
                let floor = if j == l { 1e-6 } else { 0.0 };
                assert!((fit.params.covariances[0][(j, l)] - cov[(j, l)] - floor).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn parameter_count() {
        let p = GmmParams {
            weights: vec![0.5, 0.5],
            means: Matrix::zeros(2, 3),
            covariances: vec![Matrix::identity(3), Matrix::identity(3)],
            log_likelihood_trace: Vec::new(),
        };
        assert_eq!(p.n_params(), 1 + 6 + 12);
    }
}
