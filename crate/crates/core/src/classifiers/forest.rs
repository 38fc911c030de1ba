use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::tree::{grow, Tree, TreeConfig, TreeNode};
use super::{check_finite, check_train, single_class, FittedModel, ModelParams};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::rng;

/// Random forest hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ForestConfig {
    /// Number of trees.
    pub n_trees: usize,
    /// Features sampled per split; `None` means `ceil(sqrt(d))`.
    pub max_features: Option<usize>,
    /// Draw a bootstrap sample per tree.
    pub bootstrap: bool,
    /// Per-tree depth cap.
    pub max_depth: Option<usize>,
    /// Per-tree minimum node size for splitting.
    pub min_samples_split: usize,
    /// Base seed; tree `t` uses stream `t`.
    pub seed: u64,
}

impl Default for ForestConfig {
    fn default() -> Self {
        Self { n_trees: 100, max_features: None, bootstrap: true, max_depth: None, min_samples_split: 2, seed: 0 }
    }
}

/// Trained forest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForestModel {
    /// Settings used.
    pub config: ForestConfig,
    /// Member trees.
    pub trees: Vec<Tree>,
}

impl ForestModel {
    /// Fraction of trees voting for class 1.
    pub fn score(&self, x: &[f64]) -> f64 {
        let votes = self.trees.iter().filter(|t| t.predict(x) == 1).count();
        votes as f64 / self.trees.len() as f64
    }
}

/// Bagged CART trees with per-split feature sampling.
pub fn fit_random_forest(train: &Dataset, cfg: &ForestConfig) -> Result<FittedModel> {
    check_train(train)?;
    if cfg.n_trees == 0 {
        return Err(Error::Parameter("n_trees must be positive".into()));
    }
    let (x, y) = (train.features(), train.labels());
    check_finite(x)?;
    let (n, d) = (x.rows(), x.cols());
    let m = cfg.max_features.unwrap_or_else(|| (d as f64).sqrt().ceil() as usize);
    if m == 0 || m > d {
        return Err(Error::Parameter(format!("max_features = {m} with {d} features")));
    }
    let tree_cfg = TreeConfig { max_depth: cfg.max_depth, min_samples_split: cfg.min_samples_split, max_features: Some(m) };
    let trees = if single_class(train) {
        let mut dist = [0.0; 2];
        dist[y[0] as usize] = 1.0;
        vec![Tree { nodes: vec![TreeNode::Leaf { distribution: dist, samples: n }] }]
    } else {
        (0..cfg.n_trees)
            .map(|t| {
                let mut r = rng::stream(cfg.seed, t as u64);
                let mut w = vec![0.0; n];
                if cfg.bootstrap {
                    for _ in 0..n {
                        w[r.gen_range(0..n)] += 1.0;
                    }
                } else {
                    w.iter_mut().for_each(|v| *v = 1.0);
                }
                let rows: Vec<usize> = (0..n).filter(|&i| w[i] > 0.0).collect();
                grow(x, y, &w, rows, &tree_cfg, Some(&mut r))
            })
            .collect()
    };
    Ok(FittedModel::new(train, ModelParams::RandomForest(ForestModel { config: *cfg, trees })))
}
