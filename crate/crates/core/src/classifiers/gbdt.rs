//! Second-order gradient boosting of regression trees on logistic loss.
//!
//! Features are bucketed into at most `max_bins` histogram bins; every
//! threshold lies halfway between two adjacent distinct training values.
//! Rows with a missing (NaN) value follow the learned default direction.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::tree::TIE_EPS;
use super::{check_train, sigmoid, single_class, FittedModel, ModelParams};
use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::linalg::Matrix;

/// Tree growth strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum Growth {
    /// Split every splittable node of a level before descending.
    LevelWise {
        /// Depth cap.
        max_depth: usize,
    },
    /// Repeatedly split the leaf with the largest gain.
    LeafWise {
        /// Leaf budget.
        max_leaves: usize,
    },
    /// Oblivious trees: one (feature, threshold) per level.
    Symmetric {
        /// Number of levels.
        depth: usize,
    },
}

/// Named configurations of the boosting engine.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoostPreset {
    /// Level-wise, depth 6.
    XgboostLike,
    /// Leaf-wise, 31 leaves.
    LightgbmLike,
    /// Symmetric, depth 6.
    CatboostLike,
}

impl BoostPreset {
    /// All presets.
    pub const ALL: [BoostPreset; 3] = [BoostPreset::XgboostLike, BoostPreset::LightgbmLike, BoostPreset::CatboostLike];

    /// Model id used in reports.
    pub fn name(self) -> &'static str {
        match self {
            BoostPreset::XgboostLike => "xgboost_like",
            BoostPreset::LightgbmLike => "lightgbm_like",
            BoostPreset::CatboostLike => "catboost_like",
        }
    }

    fn growth(self) -> Growth {
        match self {
            BoostPreset::XgboostLike => Growth::LevelWise { max_depth: 6 },
            BoostPreset::LightgbmLike => Growth::LeafWise { max_leaves: 31 },
            BoostPreset::CatboostLike => Growth::Symmetric { depth: 6 },
        }
    }
}

/// Boosting hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoostConfig {
    /// Preset this configuration was derived from, if any.
    pub preset: Option<BoostPreset>,
    /// Boosting rounds.
    pub n_rounds: usize,
    /// Shrinkage applied to every leaf value; 0 yields the constant model.
    pub learning_rate: f64,
    /// Tree growth strategy.
    pub growth: Growth,
    /// L2 penalty on leaf values.
    pub l2_reg: f64,
    /// Minimum hessian sum per child.
    pub min_child_weight: f64,
    /// Histogram bins per feature.
    pub max_bins: usize,
    /// Starting log-odds; `None` uses the training prior.
    pub base_score: Option<f64>,
    /// Accept NaN features and route them by a learned default direction.
    pub allow_missing: bool,
}

impl BoostConfig {
    /// 100 rounds, learning rate 0.1, l2 1.0 and the preset's growth.
    pub fn preset(preset: BoostPreset) -> Self {
        Self {
            preset: Some(preset),
            n_rounds: 100,
            learning_rate: 0.1,
            growth: preset.growth(),
            l2_reg: 1.0,
            min_child_weight: 1.0,
            max_bins: 255,
            base_score: None,
            allow_missing: true,
        }
    }

    fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::Parameter(format!("{what} in boosting config")));
        if !(self.learning_rate >= 0.0) || !self.learning_rate.is_finite() {
            return bad("learning_rate must be finite and nonnegative");
        }
        if !(self.l2_reg >= 0.0) || !(self.min_child_weight >= 0.0) {
            return bad("l2_reg and min_child_weight must be nonnegative");
        }
        if self.max_bins < 2 {
            return bad("max_bins must be at least 2");
        }
        if let Growth::LeafWise { max_leaves: 0 } = self.growth {
            return bad("max_leaves must be positive");
        }
        Ok(())
    }
}

/// Regression-tree node.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "node")]
pub enum RegNode {
    /// Additive log-odds contribution, already scaled by the learning rate.
    Leaf {
        /// Contribution.
        value: f64,
    },
    /// `x[feature] <= threshold` goes left; NaN goes left iff `default_left`.
    Split {
        /// Feature index.
        feature: usize,
        /// Threshold.
        threshold: f64,
        /// Direction of missing values.
        default_left: bool,
        /// Left child.
        left: usize,
        /// Right child.
        right: usize,
    },
}

/// Regression tree; node 0 is the root.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegTree {
    /// Node arena.
    pub nodes: Vec<RegNode>,
}

impl RegTree {
    /// Leaf value reached by `x`.
    pub fn predict(&self, x: &[f64]) -> f64 {
        let mut i = 0;
        loop {
            match self.nodes[i] {
                RegNode::Leaf { value } => return value,
                RegNode::Split { feature, threshold, default_left, left, right } => {
                    let v = x[feature];
                    let go_left = if v.is_nan() { default_left } else { v <= threshold };
                    i = if go_left { left } else { right };
                }
            }
        }
    }

    /// Number of leaves.
    pub fn n_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, RegNode::Leaf { .. })).count()
    }
}

/// Boosted ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GbdtModel {
    /// Settings used.
    pub config: BoostConfig,
    /// Starting log-odds.
    pub base_score: f64,
    /// One tree per round.
    pub trees: Vec<RegTree>,
    /// Mean training log-loss before the first round and after each round.
    pub loss_trace: Vec<f64>,
}

impl GbdtModel {
    /// Log-odds of class 1.
    pub fn margin(&self, x: &[f64]) -> f64 {
        self.base_score + self.trees.iter().map(|t| t.predict(x)).sum::<f64>()
    }

    /// Probability of class 1.
    pub fn score(&self, x: &[f64]) -> f64 {
        sigmoid(self.margin(x))
    }
}

/// Per-feature bin thresholds and the bin index of every training cell.
struct Binned {
    thresholds: Vec<Vec<f64>>,
    /// `bins[j][i]`; `u16::MAX` marks a missing value.
    bins: Vec<Vec<u16>>,
}

const MISSING: u16 = u16::MAX;

fn bin_features(x: &Matrix, max_bins: usize) -> Binned {
    let (n, d) = (x.rows(), x.cols());
    let max_bins = max_bins.min(u16::MAX as usize - 1);
    let mut thresholds = Vec::with_capacity(d);
    let mut bins = Vec::with_capacity(d);
    for j in 0..d {
        let mut sorted: Vec<f64> = (0..n).map(|i| x[(i, j)]).filter(|v| !v.is_nan()).collect();
        sorted.sort_by(f64::total_cmp);
        let mut uniq = sorted.clone();
        uniq.dedup();
        let mid = |p: usize| {
            let (a, b) = (uniq[p - 1], uniq[p]);
            let t = 0.5 * (a + b);
            if t >= b {
                a
            } else {
                t
            }
        };
        let t: Vec<f64> = if uniq.len() <= max_bins {
            (1..uniq.len()).map(mid).collect()
        } else {
            let m = sorted.len();
            let mut cuts: Vec<usize> = (1..max_bins)
                .map(|q| uniq.partition_point(|&u| u < sorted[q * m / max_bins]))
                .filter(|&p| p > 0)
                .collect();
            cuts.dedup();
            cuts.into_iter().map(mid).collect()
        };
        let col = (0..n)
            .map(|i| {
                let v = x[(i, j)];
                if v.is_nan() {
                    MISSING
                } else {
                    t.partition_point(|&th| th < v) as u16
                }
            })
            .collect();
        thresholds.push(t);
        bins.push(col);
    }
    Binned { thresholds, bins }
}

#[derive(Clone, Copy, Default)]
struct Stat {
    g: f64,
    h: f64,
    n: usize,
}

impl Stat {
    fn add(&mut self, g: f64, h: f64) {
        self.g += g;
        self.h += h;
        self.n += 1;
    }

    fn plus(self, o: Stat) -> Stat {
        Stat { g: self.g + o.g, h: self.h + o.h, n: self.n + o.n }
    }

    fn minus(self, o: Stat) -> Stat {
        Stat { g: self.g - o.g, h: self.h - o.h, n: self.n - o.n }
    }
}

/// Per-bin gradient statistics of one node for one feature.
struct Histogram {
    bins: Vec<Stat>,
    missing: Stat,
}

fn histogram(binned: &Binned, j: usize, rows: &[usize], g: &[f64], h: &[f64]) -> Histogram {
    let mut bins = vec![Stat::default(); binned.thresholds[j].len() + 1];
    let mut missing = Stat::default();
    for &i in rows {
        let b = binned.bins[j][i];
        if b == MISSING {
            missing.add(g[i], h[i]);
        } else {
            bins[b as usize].add(g[i], h[i]);
        }
    }
    Histogram { bins, missing }
}

fn score(s: Stat, lambda: f64) -> f64 {
    s.g * s.g / (s.h + lambda)
}

#[derive(Clone, Copy)]
struct Candidate {
    feature: usize,
    bin: usize,
    default_left: bool,
    gain: f64,
}

/// Best gain over all thresholds of one histogram, with missing values
/// tried on both sides. `None` when no threshold separates rows.
fn scan(hist: &Histogram, lambda: f64, min_child: f64, mut visit: impl FnMut(usize, bool, f64)) {
    let total = hist.bins.iter().fold(hist.missing, |a, &b| a.plus(b));
    let parent = score(total, lambda);
    let mut left = Stat::default();
    for b in 0..hist.bins.len() - 1 {
        left = left.plus(hist.bins[b]);
        let right_present = total.minus(hist.missing).minus(left);
        if left.n == 0 || right_present.n == 0 {
            continue;
        }
        let sides: &[bool] = if hist.missing.n > 0 { &[true, false] } else { &[true] };
        for &default_left in sides {
            let (l, r) = if default_left {
                (left.plus(hist.missing), right_present)
            } else {
                (left, right_present.plus(hist.missing))
            };
            if l.h < min_child || r.h < min_child {
                continue;
            }
            visit(b, default_left, 0.5 * (score(l, lambda) + score(r, lambda) - parent));
        }
    }
}

fn best_candidate(binned: &Binned, rows: &[usize], g: &[f64], h: &[f64], cfg: &BoostConfig) -> Option<Candidate> {
    let mut best: Option<Candidate> = None;
    for j in 0..binned.thresholds.len() {
        let hist = histogram(binned, j, rows, g, h);
        scan(&hist, cfg.l2_reg, cfg.min_child_weight, |bin, default_left, gain| {
            if gain > TIE_EPS && best.is_none_or(|b| gain > b.gain + TIE_EPS) {
                best = Some(Candidate { feature: j, bin, default_left, gain });
            }
        });
    }
    best
}

fn leaf_value(rows: &[usize], g: &[f64], h: &[f64], cfg: &BoostConfig) -> f64 {
    let (sg, sh) = rows.iter().fold((0.0, 0.0), |(a, b), &i| (a + g[i], b + h[i]));
    let denom = sh + cfg.l2_reg;
    if denom > 0.0 {
        -sg / denom * cfg.learning_rate
    } else {
        0.0
    }
}

fn partition(binned: &Binned, c: &Candidate, rows: &[usize]) -> (Vec<usize>, Vec<usize>) {
    rows.iter().partition(|&&i| {
        let b = binned.bins[c.feature][i];
        if b == MISSING {
            c.default_left
        } else {
            (b as usize) <= c.bin
        }
    })
}

fn split_node(binned: &Binned, c: &Candidate, left: usize, right: usize) -> RegNode {
    RegNode::Split {
        feature: c.feature,
        threshold: binned.thresholds[c.feature][c.bin],
        default_left: c.default_left,
        left,
        right,
    }
}

fn grow_level_wise(binned: &Binned, g: &[f64], h: &[f64], cfg: &BoostConfig, max_depth: usize) -> RegTree {
    let n = g.len();
    let mut nodes = vec![RegNode::Leaf { value: 0.0 }];
    let mut level = vec![((0..n).collect::<Vec<_>>(), 0usize)];
    for depth in 0..=max_depth {
        let mut next = Vec::new();
        for (rows, slot) in level {
            let cand = if depth < max_depth { best_candidate(binned, &rows, g, h, cfg) } else { None };
            match cand {
                Some(c) => {
                    let (l, r) = partition(binned, &c, &rows);
                    let (li, ri) = (nodes.len(), nodes.len() + 1);
                    nodes.push(RegNode::Leaf { value: 0.0 });
                    nodes.push(RegNode::Leaf { value: 0.0 });
                    nodes[slot] = split_node(binned, &c, li, ri);
                    next.push((l, li));
                    next.push((r, ri));
                }
                None => nodes[slot] = RegNode::Leaf { value: leaf_value(&rows, g, h, cfg) },
            }
        }
        if next.is_empty() {
            break;
        }
        level = next;
    }
    RegTree { nodes }
}

fn grow_leaf_wise(binned: &Binned, g: &[f64], h: &[f64], cfg: &BoostConfig, max_leaves: usize) -> RegTree {
    let n = g.len();
    let mut nodes = vec![RegNode::Leaf { value: 0.0 }];
    let rows: Vec<usize> = (0..n).collect();
    let cand = best_candidate(binned, &rows, g, h, cfg);
    let mut open = vec![(rows, 0usize, cand)];
    let mut n_leaves = 1;
    while n_leaves < max_leaves {
        let pick = open
            .iter()
            .enumerate()
            .filter_map(|(k, (_, _, c))| c.map(|c| (k, c.gain)))
            .fold(None, |b: Option<(usize, f64)>, (k, gain)| match b {
                Some((_, bg)) if gain <= bg + TIE_EPS => b,
                _ => Some((k, gain)),
            });
        let Some((k, _)) = pick else { break };
        let (rows, slot, c) = open.swap_remove(k);
        let c = c.expect("picked leaves have a candidate");
        let (l, r) = partition(binned, &c, &rows);
        let (li, ri) = (nodes.len(), nodes.len() + 1);
        nodes.push(RegNode::Leaf { value: 0.0 });
        nodes.push(RegNode::Leaf { value: 0.0 });
        nodes[slot] = split_node(binned, &c, li, ri);
        let cl = best_candidate(binned, &l, g, h, cfg);
        let cr = best_candidate(binned, &r, g, h, cfg);
        open.push((l, li, cl));
        open.push((r, ri, cr));
        // keep creation order so gain ties resolve to the older leaf
        open.sort_by_key(|(_, slot, _)| *slot);
        n_leaves += 1;
    }
    for (rows, slot, _) in open {
        nodes[slot] = RegNode::Leaf { value: leaf_value(&rows, g, h, cfg) };
    }
    RegTree { nodes }
}

fn grow_symmetric(binned: &Binned, g: &[f64], h: &[f64], cfg: &BoostConfig, depth: usize) -> RegTree {
    let n = g.len();
    let mut groups: Vec<Vec<usize>> = vec![(0..n).collect()];
    let mut levels: Vec<Candidate> = Vec::new();
    for _ in 0..depth {
        let mut best: Option<Candidate> = None;
        for j in 0..binned.thresholds.len() {
            let n_thr = binned.thresholds[j].len();
            if n_thr == 0 {
                continue;
            }
            let mut total = vec![0.0; n_thr];
            let mut separates = vec![false; n_thr];
            for rows in &groups {
                let hist = histogram(binned, j, rows, g, h);
                let all = hist.bins.iter().fold(hist.missing, |a, &b| a.plus(b));
                let parent = score(all, cfg.l2_reg);
                let mut left = hist.missing;
                for b in 0..n_thr {
                    left = left.plus(hist.bins[b]);
                    let right = all.minus(left);
                    if left.n > 0 && right.n > 0 {
                        separates[b] = true;
                        total[b] += 0.5 * (score(left, cfg.l2_reg) + score(right, cfg.l2_reg) - parent);
                    }
                }
            }
            for b in 0..n_thr {
                let gain = total[b];
                if separates[b] && gain > TIE_EPS && best.is_none_or(|c| gain > c.gain + TIE_EPS) {
                    best = Some(Candidate { feature: j, bin: b, default_left: true, gain });
                }
            }
        }
        let Some(c) = best else { break };
        groups = groups
            .iter()
            .flat_map(|rows| {
                let (l, r) = partition(binned, &c, rows);
                [l, r]
            })
            .collect();
        levels.push(c);
    }
    // complete binary tree in breadth-first order
    let internal = (1usize << levels.len()) - 1;
    let mut nodes = Vec::with_capacity(2 * internal + 1);
    for k in 0..internal {
        let level = (usize::BITS - (k + 1).leading_zeros() - 1) as usize;
        nodes.push(split_node(binned, &levels[level], 2 * k + 1, 2 * k + 2));
    }
    for rows in &groups {
        nodes.push(RegNode::Leaf { value: leaf_value(rows, g, h, cfg) });
    }
    RegTree { nodes }
}

fn mean_log_loss(margin: &[f64], y: &[u8]) -> f64 {
    let total: f64 = margin
        .iter()
        .zip(y)
        .map(|(&z, &t)| {
            let softplus = z.max(0.0) + (-z.abs()).exp().ln_1p();
            softplus - f64::from(t) * z
        })
        .sum();
    total / y.len() as f64
}

/// Newton boosting: each round fits a tree to the gradients `p - y` and
/// hessians `p (1 - p)` of the logistic loss; leaves hold
/// `-lr * sum g / (sum h + l2_reg)`.
pub fn fit_gbdt(train: &Dataset, cfg: &BoostConfig) -> Result<FittedModel> {
    check_train(train)?;
    cfg.validate()?;
    let (x, y) = (train.features(), train.labels());
    if x.as_slice().iter().any(|v| v.is_infinite() || (v.is_nan() && !cfg.allow_missing)) {
        return Err(Error::Parameter("features must be finite (NaN only when missing values are allowed)".into()));
    }
    single_class(train);
    let n = x.rows();
    let base_score = cfg.base_score.unwrap_or_else(|| {
        let p = (train.class_counts()[1] as f64 / n as f64).clamp(1e-6, 1.0 - 1e-6);
        (p / (1.0 - p)).ln()
    });
    let mut margin = vec![base_score; n];
    let mut loss_trace = vec![mean_log_loss(&margin, y)];
    let mut trees = Vec::new();
    if cfg.learning_rate > 0.0 {
        let binned = bin_features(x, cfg.max_bins);
        let mut g = vec![0.0; n];
        let mut h = vec![0.0; n];
        for _ in 0..cfg.n_rounds {
            for i in 0..n {
                let p = sigmoid(margin[i]);
                g[i] = p - f64::from(y[i]);
                h[i] = p * (1.0 - p);
            }
            let tree = match cfg.growth {
                Growth::LevelWise { max_depth } => grow_level_wise(&binned, &g, &h, cfg, max_depth),
                Growth::LeafWise { max_leaves } => grow_leaf_wise(&binned, &g, &h, cfg, max_leaves),
                Growth::Symmetric { depth } => grow_symmetric(&binned, &g, &h, cfg, depth),
            };
            for (i, m) in margin.iter_mut().enumerate() {
                *m += tree.predict(x.row(i));
            }
            loss_trace.push(mean_log_loss(&margin, y));
            trees.push(tree);
        }
    }
    let model = GbdtModel { config: *cfg, base_score, trees, loss_trace };
    Ok(FittedModel::new(train, ModelParams::Gbdt(model)))
}
