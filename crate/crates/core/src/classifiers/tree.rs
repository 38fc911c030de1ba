//! CART with weighted Gini impurity.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index;
use serde::{Deserialize, Serialize};

use super::{check_finite, check_train, FittedModel, ModelParams};
use crate::data::Dataset;
use crate::error::Result;
use crate::linalg::Matrix;
use crate::rng::Rng;

/// Splits whose impurity decrease is within this margin are treated as ties.
pub(crate) const TIE_EPS: f64 = 1e-12;

/// Growth limits for a single tree.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TreeConfig {
    /// Depth cap; `None` grows until leaves are pure or unsplittable.
    pub max_depth: Option<usize>,
    /// Nodes with fewer samples become leaves.
    pub min_samples_split: usize,
    /// Features examined per split; `None` means all.
    pub max_features: Option<usize>,
}

impl Default for TreeConfig {
    fn default() -> Self {
        Self { max_depth: None, min_samples_split: 2, max_features: None }
    }
}

/// Tree node stored in a flat arena.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "node")]
pub enum TreeNode {
    /// Terminal node with the weighted class distribution of its samples.
    Leaf {
        /// `[P(class 0), P(class 1)]`.
        distribution: [f64; 2],
        /// Training samples that reached the leaf.
        samples: usize,
    },
    /// `x[feature] <= threshold` goes left.
    Split {
        /// Feature index.
        feature: usize,
        /// Midpoint between two adjacent distinct training values.
        threshold: f64,
        /// Arena index of the left child.
        left: usize,
        /// Arena index of the right child.
        right: usize,
    },
}

/// Binary classification tree; node 0 is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tree {
    /// Node arena.
    pub nodes: Vec<TreeNode>,
}

impl Tree {
    /// Probability of class 1 at the leaf reached by `x`.
    pub fn predict_proba(&self, x: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            match &self.nodes[i] {
                TreeNode::Leaf { distribution, .. } => return distribution[1],
                TreeNode::Split { feature, threshold, left, right } => {
                    i = if x[*feature] <= *threshold { *left } else { *right };
                }
            }
        }
    }

    /// Hard label (`P(class 1) >= 0.5`).
    pub fn predict(&self, x: &[f64]) -> u8 {
        u8::from(self.predict_proba(x) >= 0.5)
    }

    /// Longest root-to-leaf path in edges.
    pub fn depth(&self) -> usize {
        fn walk(nodes: &[TreeNode], i: usize) -> usize {
            match &nodes[i] {
                TreeNode::Leaf { .. } => 0,
                TreeNode::Split { left, right, .. } => 1 + walk(nodes, *left).max(walk(nodes, *right)),
            }
        }
        walk(&self.nodes, 0)
    }

    /// Number of leaves.
    pub fn n_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, TreeNode::Leaf { .. })).count()
    }
}

/// Weighted Gini impurity of class weights `[w0, w1]`.
pub(crate) fn gini(w: [f64; 2]) -> f64 {
    let t = w[0] + w[1];
    if t <= 0.0 {
        return 0.0;
    }
    let (p0, p1) = (w[0] / t, w[1] / t);
    1.0 - p0 * p0 - p1 * p1
}

/// Parent impurity minus the weighted child impurities.
pub(crate) fn impurity_decrease(left: [f64; 2], right: [f64; 2]) -> f64 {
    let parent = [left[0] + right[0], left[1] + right[1]];
    let (wl, wr) = (left[0] + left[1], right[0] + right[1]);
    let w = wl + wr;
    gini(parent) - (wl / w) * gini(left) - (wr / w) * gini(right)
}

/// Best split found by [`best_split`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) struct SplitChoice {
    pub feature: usize,
    pub threshold: f64,
    pub decrease: f64,
}

/// Exhaustive search over the given features and every midpoint between
/// adjacent distinct values. Ties go to the lowest feature index, then the
/// smallest threshold.
pub(crate) fn best_split(x: &Matrix, y: &[u8], w: &[f64], rows: &[usize], features: &[usize]) -> Option<SplitChoice> {
    let mut total = [0.0; 2];
    for &i in rows {
        total[y[i] as usize] += w[i];
    }
    let mut best: Option<SplitChoice> = None;
    let mut order: Vec<usize> = rows.to_vec();
    for &f in features {
        order.sort_by(|&a, &b| x[(a, f)].total_cmp(&x[(b, f)]).then(a.cmp(&b)));
        let mut left = [0.0; 2];
        for pos in 0..order.len() - 1 {
            let i = order[pos];
            left[y[i] as usize] += w[i];
            let (v, next) = (x[(i, f)], x[(order[pos + 1], f)]);
            if v == next {
                continue;
            }
            let right = [total[0] - left[0], total[1] - left[1]];
            let decrease = impurity_decrease(left, right);
            if best.is_none_or(|b| decrease > b.decrease + TIE_EPS) {
                let mut threshold = 0.5 * (v + next);
                if threshold >= next {
                    threshold = v;
                }
                best = Some(SplitChoice { feature: f, threshold, decrease });
            }
        }
    }
    best
}

/// Grows a tree on the rows listed in `rows` with per-row weights `w`.
pub(crate) fn grow(x: &Matrix, y: &[u8], w: &[f64], rows: Vec<usize>, cfg: &TreeConfig, mut rng: Option<&mut Rng>) -> Tree {
    let d = x.cols();
    let mut nodes = Vec::new();
    // (rows, depth, arena slot)
    let mut stack = vec![(rows, 0usize, 0usize)];
    nodes.push(TreeNode::Leaf { distribution: [1.0, 0.0], samples: 0 });
    while let Some((rows, depth, slot)) = stack.pop() {
        let mut weights = [0.0; 2];
        for &i in &rows {
            weights[y[i] as usize] += w[i];
        }
        let total = weights[0] + weights[1];
        let leaf = TreeNode::Leaf {
            distribution: if total > 0.0 { [weights[0] / total, weights[1] / total] } else { [1.0, 0.0] },
            samples: rows.len(),
        };
        let pure = weights[0] == 0.0 || weights[1] == 0.0;
        let depth_capped = cfg.max_depth.is_some_and(|m| depth >= m);
        if pure || depth_capped || rows.len() < cfg.min_samples_split.max(2) {
            nodes[slot] = leaf;
            continue;
        }
        let features: Vec<usize> = match (cfg.max_features, rng.as_deref_mut()) {
            (Some(m), Some(r)) if m < d => {
                let mut f = index::sample(r, d, m).into_vec();
                f.sort_unstable();
                f
            }
            _ => (0..d).collect(),
        };
        let Some(split) = best_split(x, y, w, &rows, &features) else {
            nodes[slot] = leaf;
            continue;
        };
        let (l, r): (Vec<usize>, Vec<usize>) = rows.iter().partition(|&&i| x[(i, split.feature)] <= split.threshold);
        let (li, ri) = (nodes.len(), nodes.len() + 1);
        nodes.push(TreeNode::Leaf { distribution: [1.0, 0.0], samples: 0 });
        nodes.push(TreeNode::Leaf { distribution: [1.0, 0.0], samples: 0 });
        nodes[slot] = TreeNode::Split { feature: split.feature, threshold: split.threshold, left: li, right: ri };
        stack.push((r, depth + 1, ri));
        stack.push((l, depth + 1, li));
    }
    Tree { nodes }
}

/// CART on all features with unit sample weights.
pub fn fit_decision_tree(train: &Dataset, cfg: &TreeConfig) -> Result<FittedModel> {
    check_train(train)?;
    check_finite(train.features())?;
    super::single_class(train);
    let n = train.n_rows();
    let cfg = TreeConfig { max_features: None, ..*cfg };
    let tree = grow(train.features(), train.labels(), &vec![1.0; n], (0..n).collect(), &cfg, None);
    Ok(FittedModel::new(train, ModelParams::DecisionTree(tree)))
}
