use alloc::format;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{check_finite, check_train, FittedModel, ModelParams};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::linalg::{squared_distance, Matrix};

/// KNN hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnnConfig {
    /// Neighbours consulted per query.
    pub k: usize,
}

impl Default for KnnConfig {
    fn default() -> Self {
        Self { k: 5 }
    }
}

/// Stored training set for Euclidean nearest-neighbour voting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    /// Settings used.
    pub config: KnnConfig,
    /// Training features.
    pub points: Matrix,
    /// Training labels.
    pub labels: Vec<u8>,
}

impl KnnModel {
    /// Fraction of the `k` nearest training rows labelled 1. Equal
    /// distances are broken by the lower training row.
    pub fn score(&self, x: &[f64]) -> f64 {
        let k = self.config.k;
        let mut near: Vec<(f64, usize)> = Vec::with_capacity(k + 1);
        for (i, p) in self.points.iter_rows().enumerate() {
            let d = squared_distance(x, p);
            if near.len() == k && d >= near[k - 1].0 {
                continue;
            }
            let pos = near.partition_point(|&(e, _)| e <= d);
            near.insert(pos, (d, i));
            near.truncate(k);
        }
        near.iter().filter(|&&(_, i)| self.labels[i] == 1).count() as f64 / k as f64
    }
}

/// Lazy learner: keeps the training rows.
pub fn fit_knn(train: &Dataset, cfg: &KnnConfig) -> Result<FittedModel> {
    check_train(train)?;
    check_finite(train.features())?;
    if cfg.k == 0 || cfg.k > train.n_rows() {
        return Err(Error::Parameter(format!("k = {} with {} training rows", cfg.k, train.n_rows())));
    }
    let model = KnnModel { config: *cfg, points: train.features().clone(), labels: train.labels().to_vec() };
    Ok(FittedModel::new(train, ModelParams::Knn(model)))
}
