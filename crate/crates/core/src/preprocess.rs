//! Scaling, Pearson correlation, correlation-driven feature elimination and PCA.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::data::{ColumnSpec, Dataset};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};

/// Per-column transform learned from training data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ColumnScaler {
    /// Binary columns are left untouched.
    Passthrough,
    /// `(x - mean) / std`; a zero `std` maps the column to 0.
    Standard {
        /// Training mean.
        mean: f64,
        /// Population standard deviation.
        std: f64,
    },
    /// `(x - min) / (max - min)`; a zero range maps the column to 0.
    MinMax {
        /// Training minimum.
        min: f64,
        /// Training maximum.
        max: f64,
    },
}

impl ColumnScaler {
    fn apply(&self, x: f64) -> f64 {
        match *self {
            ColumnScaler::Passthrough => x,
            ColumnScaler::Standard { mean, std } => {
                if std > 0.0 {
                    (x - mean) / std
                } else {
                    0.0
                }
            }
            ColumnScaler::MinMax { min, max } => {
                if max > min {
                    (x - min) / (max - min)
                } else {
                    0.0
                }
            }
        }
    }

    fn is_constant(&self) -> bool {
        match *self {
            ColumnScaler::Passthrough => false,
            ColumnScaler::Standard { std, .. } => std == 0.0,
            ColumnScaler::MinMax { min, max } => max == min,
        }
    }
}

/// Scaling parameters for every feature column, fit on training data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalerParams {
    /// Feature names the parameters were fit on.
    pub columns: Vec<String>,
    /// One transform per column.
    pub scalers: Vec<ColumnScaler>,
}

impl ScalerParams {
    /// Columns that were constant at fit time (mapped to 0).
    pub fn constant_columns(&self) -> Vec<String> {
        self.columns
            .iter()
            .zip(&self.scalers)
            .filter(|(_, s)| s.is_constant())
            .map(|(c, _)| c.clone())
            .collect()
    }
}

/// Fits mean / population standard deviation on continuous columns.
pub fn fit_standardizer(train: &Dataset) -> ScalerParams {
    fit_with(train, |values| {
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        ColumnScaler::Standard { mean, std: var.sqrt() }
    })
}

/// Fits min / max on continuous columns.
pub fn fit_minmax(train: &Dataset) -> ScalerParams {
    fit_with(train, |values| {
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        ColumnScaler::MinMax { min, max }
    })
}

fn fit_with(train: &Dataset, fit: impl Fn(&[f64]) -> ColumnScaler) -> ScalerParams {
    let scalers: Vec<ColumnScaler> = train
        .schema()
        .columns
        .iter()
        .enumerate()
        .map(|(j, spec)| {
            if spec.kind.is_continuous() && train.n_rows() > 0 {
                fit(&train.features().column(j))
            } else {
                ColumnScaler::Passthrough
            }
        })
        .collect();
    let params = ScalerParams { columns: train.feature_names(), scalers };
    for c in params.constant_columns() {
        log::warn!("column {c} is constant in the training data; scaled to 0");
    }
    params
}

/// Applies fitted parameters unchanged (train or test side).
pub fn apply_scaler(ds: &Dataset, params: &ScalerParams) -> Result<Dataset> {
    if ds.feature_names() != params.columns {
        return Err(Error::Parameter(format!(
            "scaler fit on {:?} cannot be applied to {:?}",
            params.columns,
            ds.feature_names()
        )));
    }
    let mut out = ds.features().clone();
    for i in 0..out.rows() {
        for (v, s) in out.row_mut(i).iter_mut().zip(&params.scalers) {
            *v = s.apply(*v);
        }
    }
    let kind = match params.scalers.iter().find(|s| !matches!(s, ColumnScaler::Passthrough)) {
        Some(ColumnScaler::MinMax { .. }) => "min-max",
        _ => "standardize",
    };
    ds.with_features(ds.schema().columns.clone(), out, format!("{kind} scaling"))
}

/// Fits and applies min-max scaling to the training set.
pub fn minmax_scale(train: &Dataset) -> Result<(Dataset, ScalerParams)> {
    let params = fit_minmax(train);
    Ok((apply_scaler(train, &params)?, params))
}

/// Symmetric matrix of Pearson coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrelationMatrix {
    /// Column names in matrix order.
    pub names: Vec<String>,
    /// `d x d` coefficients.
    pub values: Matrix,
}

impl CorrelationMatrix {
    /// Coefficient between two named columns.
    pub fn get(&self, a: &str, b: &str) -> Option<f64> {
        let i = self.names.iter().position(|n| n == a)?;
        let j = self.names.iter().position(|n| n == b)?;
        Some(self.values[(i, j)])
    }
}

/// Pearson correlation of every pair of feature columns.
///
/// Constant columns correlate 0 with everything else (1 with themselves).
pub fn correlation_matrix(ds: &Dataset) -> Result<CorrelationMatrix> {
    let n = ds.n_rows();
    if n < 2 {
        return Err(Error::Numerical(format!("correlation needs at least 2 rows, got {n}")));
    }
    let d = ds.n_features();
    let x = ds.features();
    let means = x.column_means();
    let mut centered: Vec<Vec<f64>> = (0..d).map(|j| x.column(j).iter().map(|v| v - means[j]).collect()).collect();
    let norms: Vec<f64> = centered.iter().map(|c| linalg::dot(c, c).sqrt()).collect();
    for (j, norm) in norms.iter().enumerate() {
        if *norm == 0.0 {
            log::warn!("column {} is constant; correlations set to 0", ds.schema().columns[j].name);
        } else {
            centered[j].iter_mut().for_each(|v| *v /= norm);
        }
    }
    let mut values = Matrix::identity(d);
    for a in 0..d {
        for b in (a + 1)..d {
            let r = if norms[a] == 0.0 || norms[b] == 0.0 {
                0.0
            } else {
                linalg::dot(&centered[a], &centered[b]).clamp(-1.0, 1.0)
            };
            values[(a, b)] = r;
            values[(b, a)] = r;
        }
    }
    Ok(CorrelationMatrix { names: ds.feature_names(), values })
}

/// Default `|r|` cutoff for threshold-mode reduction.
pub const DEFAULT_CORRELATION_THRESHOLD: f64 = 0.8;

/// Which features to eliminate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum ReductionPlan {
    /// Remove exactly these columns.
    DropList {
        /// Column names.
        columns: Vec<String>,
    },
    /// Greedily remove one member of every pair with `|r| > threshold`.
    Threshold {
        /// Cutoff in `(0, 1]`.
        threshold: f64,
    },
}

/// Reduced dataset and the removed column names (in removal order).
#[derive(Debug, Clone)]
pub struct Reduction {
    /// Dataset without the removed columns.
    pub dataset: Dataset,
    /// Removed columns.
    pub dropped: Vec<String>,
}

/// Removes features per `plan`.
///
/// Threshold mode repeatedly takes the most strongly correlated remaining
/// pair above the cutoff and drops the member with the larger mean absolute
/// correlation to the other remaining features; ties drop the
/// lexicographically later name.
pub fn reduce_features(ds: &Dataset, plan: &ReductionPlan) -> Result<Reduction> {
    let names = ds.feature_names();
    let dropped: Vec<String> = match plan {
        ReductionPlan::DropList { columns } => {
            for c in columns {
                if *c == ds.schema().label_column {
                    return Err(Error::Reduction(format!("label column {c} cannot be dropped")));
                }
                if !names.contains(c) {
                    return Err(Error::Reduction(format!("unknown column {c}")));
                }
            }
            let mut unique = Vec::new();
            for c in columns {
                if !unique.contains(c) {
                    unique.push(c.clone());
                }
            }
            unique
        }
        ReductionPlan::Threshold { threshold } => {
            if !(*threshold > 0.0 && *threshold <= 1.0) {
                return Err(Error::Parameter(format!("threshold {threshold} outside (0, 1]")));
            }
            threshold_drops(&correlation_matrix(ds)?, *threshold)
        }
    };
    let keep: Vec<usize> = (0..names.len()).filter(|&j| !dropped.contains(&names[j])).collect();
    if keep.is_empty() {
        return Err(Error::Reduction("plan removes every feature".into()));
    }
    let columns: Vec<ColumnSpec> = keep.iter().map(|&j| ds.schema().columns[j].clone()).collect();
    let features = ds.features().select_columns(&keep);
    let dataset = ds.with_features(columns, features, format!("dropped {dropped:?}"))?;
    Ok(Reduction { dataset, dropped })
}

fn threshold_drops(corr: &CorrelationMatrix, threshold: f64) -> Vec<String> {
    let d = corr.names.len();
    let r = |a: usize, b: usize| corr.values[(a, b)].abs();
    let mut alive: Vec<usize> = (0..d).collect();
    let mut dropped = Vec::new();
    loop {
        let mut best: Option<(usize, usize, f64)> = None;
        for (ia, &a) in alive.iter().enumerate() {
            for &b in &alive[ia + 1..] {
                let v = r(a, b);
                if v > threshold && best.is_none_or(|(_, _, bv)| v > bv) {
                    best = Some((a, b, v));
                }
            }
        }
        let Some((a, b, _)) = best else { break };
        let mean_abs = |x: usize| {
            let others: Vec<usize> = alive.iter().copied().filter(|&o| o != x).collect();
            others.iter().map(|&o| r(x, o)).sum::<f64>() / others.len().max(1) as f64
        };
        let (ma, mb) = (mean_abs(a), mean_abs(b));
        let victim = if (ma - mb).abs() <= 1e-12 {
            if corr.names[a] > corr.names[b] { a } else { b }
        } else if ma > mb {
            a
        } else {
            b
        };
        dropped.push(corr.names[victim].clone());
        alive.retain(|&x| x != victim);
        if alive.len() < 2 {
            break;
        }
    }
    dropped
}

/// Principal components of a dataset.
#[derive(Debug, Clone)]
pub struct Pca {
    /// Projected data with columns `PC1..PCk`.
    pub dataset: Dataset,
    /// `d x k` orthonormal basis (columns are components).
    pub components: Matrix,
    /// Variance along each component, nonincreasing.
    pub explained_variance: Vec<f64>,
    /// Total variance of the input (trace of the covariance).
    pub total_variance: f64,
    /// Column means subtracted before projection.
    pub mean: Vec<f64>,
}

impl Pca {
    /// Fraction of the total variance captured by each component.
    pub fn explained_variance_ratio(&self) -> Vec<f64> {
        self.explained_variance.iter().map(|v| v / self.total_variance).collect()
    }

    /// Projects new rows with the fitted mean and basis.
    pub fn project(&self, x: &Matrix) -> Result<Matrix> {
        let mut centered = x.clone();
        for i in 0..centered.rows() {
            for (v, m) in centered.row_mut(i).iter_mut().zip(&self.mean) {
                *v -= m;
            }
        }
        centered.matmul(&self.components)
    }
}

/// PCA via Jacobi eigen-decomposition of the population covariance.
pub fn pca_transform(ds: &Dataset, n_components: usize) -> Result<Pca> {
    let d = ds.n_features();
    if n_components == 0 || n_components > d {
        return Err(Error::Parameter(format!("n_components = {n_components} with {d} features")));
    }
    let x = ds.features();
    let cov = x.covariance();
    let eig = linalg::symmetric_eigen(&cov)?;
    // ascending -> take from the top
    let order: Vec<usize> = (0..d).rev().take(n_components).collect();
    let mut components = Matrix::zeros(d, n_components);
    for (dst, &src) in order.iter().enumerate() {
        components.set_column(dst, &eig.vector(src));
    }
    let explained_variance: Vec<f64> = order.iter().map(|&k| eig.values[k].max(0.0)).collect();
    let total_variance = (0..d).map(|j| cov[(j, j)]).sum();
    let mean = x.column_means();
    let mut pca = Pca {
        dataset: ds.clone(),
        components,
        explained_variance,
        total_variance,
        mean,
    };
    let projected = pca.project(x)?;
    let columns = (1..=n_components).map(|k| ColumnSpec::continuous(&format!("PC{k}"))).collect();
    pca.dataset = ds.with_features(columns, projected, format!("pca n_components={n_components}"))?;
    Ok(pca)
}
