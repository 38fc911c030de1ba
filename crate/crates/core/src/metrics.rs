//! Evaluation measures: confusion-matrix scores, ROC/AUC, silhouette,
//! mixture log-likelihood with BIC, and cluster-to-label alignment.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::clustering::GmmParams;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// Binary confusion counts (positive class = 1).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    /// Predicted 1, truth 1.
    pub tp: usize,
    /// Predicted 1, truth 0.
    pub fp: usize,
    /// Predicted 0, truth 0.
    pub tn: usize,
    /// Predicted 0, truth 1.
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl ConfusionMatrix {
    /// Number of evaluated samples.
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    /// Correct predictions (`tp + tn`).
    pub fn correct(&self) -> usize {
        self.tp + self.tn
    }
}

/// Counts predictions against ground truth.
pub fn confusion(pred: &[u8], truth: &[u8]) -> Result<ConfusionMatrix> {
    if pred.len() != truth.len() {
        return Err(Error::Metric(format!("{} predictions for {} labels", pred.len(), truth.len())));
    }
    let mut cm = ConfusionMatrix::default();
    for (i, (&p, &t)) in pred.iter().zip(truth).enumerate() {
        match (p, t) {
            (1, 1) => cm.tp += 1,
            (1, 0) => cm.fp += 1,
            (0, 0) => cm.tn += 1,
            (0, 1) => cm.fn_ += 1,
            _ => return Err(Error::Metric(format!("sample {i}: labels must be 0 or 1, got ({p}, {t})"))),
        }
    }
    Ok(cm)
}

/// Accuracy, precision, recall and F1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreSet {
    /// `(TP + TN) / total`.
    pub accuracy: f64,
    /// `TP / (TP + FP)`, 0 when undefined.
    pub precision: f64,
    /// `TP / (TP + FN)`, 0 when undefined.
    pub recall: f64,
    /// `2 TP / (2 TP + FP + FN)`, 0 when undefined.
    pub f1: f64,
}

fn ratio(num: usize, den: usize, what: &str) -> f64 {
    if den == 0 {
        log::warn!("{what} has a zero denominator; reported as 0");
        0.0
    } else {
        num as f64 / den as f64
    }
}

/// Applies the four score formulas to a confusion matrix.
pub fn scores(cm: &ConfusionMatrix) -> Result<ScoreSet> {
    let total = cm.total();
    if total == 0 {
        return Err(Error::Metric("empty confusion matrix".into()));
    }
    Ok(ScoreSet {
        accuracy: cm.correct() as f64 / total as f64,
        precision: ratio(cm.tp, cm.tp + cm.fp, "precision"),
        recall: ratio(cm.tp, cm.tp + cm.fn_, "recall"),
        f1: ratio(2 * cm.tp, 2 * cm.tp + cm.fp + cm.fn_, "f1"),
    })
}

/// One operating point of a ROC curve.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    /// False-positive rate.
    pub fpr: f64,
    /// True-positive rate.
    pub tpr: f64,
    /// Scores `>= threshold` are called positive; the first point uses `+inf`.
    pub threshold: f64,
}

/// ROC curve and the area under it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    /// Points from `(0, 0)` to `(1, 1)`.
    pub points: Vec<RocPoint>,
    /// Trapezoidal area.
    pub auc: f64,
}

/// ROC curve by sweeping thresholds over the distinct scores. Equal scores
/// form one step, so ties contribute half credit to the area.
pub fn roc_auc(scores: &[f64], truth: &[u8]) -> Result<RocCurve> {
    if scores.len() != truth.len() {
        return Err(Error::Metric(format!("{} scores for {} labels", scores.len(), truth.len())));
    }
    if scores.iter().any(|s| s.is_nan()) {
        return Err(Error::Metric("scores contain NaN".into()));
    }
    let pos = truth.iter().filter(|&&t| t == 1).count();
    let neg = truth.len() - pos;
    if pos == 0 || neg == 0 {
        return Err(Error::Metric("ROC needs both classes in the truth vector".into()));
    }
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let mut points = vec![RocPoint { fpr: 0.0, tpr: 0.0, threshold: f64::INFINITY }];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut auc = 0.0;
    let mut i = 0;
    while i < order.len() {
        let s = scores[order[i]];
        while i < order.len() && scores[order[i]] == s {
            if truth[order[i]] == 1 {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        let prev = *points.last().expect("curve starts non-empty");
        let p = RocPoint { fpr: fp as f64 / neg as f64, tpr: tp as f64 / pos as f64, threshold: s };
        auc += (p.fpr - prev.fpr) * (p.tpr + prev.tpr) * 0.5;
        points.push(p);
    }
    Ok(RocCurve { points, auc })
}

/// Mapping from cluster ids to class labels and the resulting scores.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterLabelMap {
    /// `mapping[c]` is the label assigned to cluster `c`.
    pub mapping: Vec<u8>,
    /// Assignments translated to labels.
    pub predicted: Vec<u8>,
    /// Confusion of the mapped labels.
    pub confusion: ConfusionMatrix,
    /// Scores of the mapped labels.
    pub scores: ScoreSet,
}

/// Maps clusters to labels so that accuracy is maximal.
///
/// With at most two clusters every injective mapping onto `{0, 1}` is tried
/// (identity wins ties). With more clusters than labels no bijection exists
/// and each cluster takes its majority label (ties -> 0), which is the
/// accuracy-maximizing many-to-one map.
pub fn align_clusters(assignments: &[usize], truth: &[u8]) -> Result<ClusterLabelMap> {
    if assignments.len() != truth.len() || assignments.is_empty() {
        return Err(Error::Metric(format!("{} assignments for {} labels", assignments.len(), truth.len())));
    }
    let k = assignments.iter().max().map_or(0, |m| m + 1);
    let mut counts = vec![[0usize; 2]; k];
    for (&c, &t) in assignments.iter().zip(truth) {
        if t > 1 {
            return Err(Error::Metric(format!("label {t} is not binary")));
        }
        counts[c][t as usize] += 1;
    }
    let mapping: Vec<u8> = if k <= 2 {
        let candidates: Vec<Vec<u8>> = if k == 1 { vec![vec![0], vec![1]] } else { vec![vec![0, 1], vec![1, 0]] };
        let agree = |m: &Vec<u8>| m.iter().enumerate().map(|(c, &l)| counts[c][l as usize]).sum::<usize>();
        let mut best = candidates[0].clone();
        for cand in &candidates[1..] {
            if agree(cand) > agree(&best) {
                best = cand.clone();
            }
        }
        best
    } else {
        counts.iter().map(|c| u8::from(c[1] > c[0])).collect()
    };
    let predicted: Vec<u8> = assignments.iter().map(|&c| mapping[c]).collect();
    let cm = confusion(&predicted, truth)?;
    Ok(ClusterLabelMap { mapping, predicted, confusion: cm, scores: scores(&cm)? })
}

/// Per-point silhouette values and their mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Silhouette {
    /// One value per point, in `[-1, 1]`.
    pub values: Vec<f64>,
    /// Mean over points.
    pub mean: f64,
}

/// Silhouette with Euclidean distance: `(b - a) / max(a, b)` where `a` is the
/// mean distance to the rest of the point's cluster and `b` the smallest mean
/// distance to another cluster. Points in singleton clusters score 0.
pub fn silhouette(points: &Matrix, assignments: &[usize]) -> Result<Silhouette> {
    let n = points.rows();
    if assignments.len() != n {
        return Err(Error::Metric(format!("{} assignments for {n} points", assignments.len())));
    }
    // compact ids so empty ids do not count as clusters
    let mut ids: Vec<usize> = assignments.to_vec();
    ids.sort_unstable();
    ids.dedup();
    let k = ids.len();
    if k < 2 {
        return Err(Error::Metric("silhouette needs at least two clusters".into()));
    }
    let cluster: Vec<usize> = assignments.iter().map(|a| ids.binary_search(a).expect("present")).collect();
    let mut sizes = vec![0usize; k];
    cluster.iter().for_each(|&c| sizes[c] += 1);

    let mut sums = vec![0.0; n * k];
    for i in 0..n {
        let xi = points.row(i);
        for j in (i + 1)..n {
            let d = linalg::distance(xi, points.row(j));
            sums[i * k + cluster[j]] += d;
            sums[j * k + cluster[i]] += d;
        }
    }
    let values: Vec<f64> = (0..n)
        .map(|i| {
            let own = cluster[i];
            if sizes[own] == 1 {
                return 0.0;
            }
            let a = sums[i * k + own] / (sizes[own] - 1) as f64;
            let b = (0..k)
                .filter(|&c| c != own)
                .map(|c| sums[i * k + c] / sizes[c] as f64)
                .fold(f64::INFINITY, f64::min);
            let m = a.max(b);
            if m == 0.0 {
                0.0
            } else {
                (b - a) / m
            }
        })
        .collect();
    let mean = values.iter().sum::<f64>() / n as f64;
    Ok(Silhouette { values, mean })
}

const LN_2PI: f64 = 1.837_877_066_409_345_5;

/// Log density of `x` under `N(mean, L Lᵀ)` given the Cholesky factor.
pub(crate) fn gaussian_log_density(x: &[f64], mean: &[f64], chol: &Matrix, log_det: f64) -> f64 {
    let diff: Vec<f64> = x.iter().zip(mean).map(|(a, b)| a - b).collect();
    let z = linalg::forward_substitute(chol, &diff);
    -0.5 * (x.len() as f64 * LN_2PI + log_det + linalg::dot(&z, &z))
}

pub(crate) fn chol_log_det(chol: &Matrix) -> f64 {
    2.0 * (0..chol.rows()).map(|i| chol[(i, i)].ln()).sum::<f64>()
}

/// `ln(sum(exp(v)))` without overflow.
pub(crate) fn log_sum_exp(values: &[f64]) -> f64 {
    let m = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if m == f64::NEG_INFINITY {
        return m;
    }
    m + values.iter().map(|v| (v - m).exp()).sum::<f64>().ln()
}

/// Total log-likelihood `sum_i ln sum_k w_k N(x_i; mu_k, Sigma_k)`.
///
/// A covariance that is not positive definite is reported as
/// [`Error::Numerical`]; nothing is regularized here.
pub fn gaussian_log_likelihood(points: &Matrix, mixture: &GmmParams) -> Result<f64> {
    let k = mixture.weights.len();
    if k == 0 || mixture.means.rows() != k || mixture.covariances.len() != k {
        return Err(Error::Parameter("mixture components are inconsistent".into()));
    }
    if mixture.means.cols() != points.cols() {
        return Err(Error::Parameter(format!(
            "mixture dimension {} vs data dimension {}",
            mixture.means.cols(),
            points.cols()
        )));
    }
    let wsum: f64 = mixture.weights.iter().sum();
    if (wsum - 1.0).abs() > 1e-9 || mixture.weights.iter().any(|w| *w < 0.0) {
        return Err(Error::Parameter(format!("mixture weights sum to {wsum}")));
    }
    let chols = mixture.covariances.iter().map(linalg::cholesky).collect::<Result<Vec<_>>>()?;
    let log_dets: Vec<f64> = chols.iter().map(chol_log_det).collect();
    let log_w: Vec<f64> = mixture.weights.iter().map(|w| w.ln()).collect();
    let mut total = 0.0;
    let mut terms = vec![0.0; k];
    for x in points.iter_rows() {
        for c in 0..k {
            terms[c] = log_w[c] + gaussian_log_density(x, mixture.means.row(c), &chols[c], log_dets[c]);
        }
        total += log_sum_exp(&terms);
    }
    Ok(total)
}

/// Bayesian information criterion `r ln(q) - 2 ln(M)` where `ln(M)` is the
/// maximized log-likelihood. Lower is better.
pub fn bic(log_likelihood: f64, n_params: usize, n_samples: usize) -> f64 {
    n_params as f64 * (n_samples as f64).ln() - 2.0 * log_likelihood
}
