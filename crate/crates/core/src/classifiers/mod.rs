//! Supervised binary classifiers behind one fit/predict contract.
//!
//! Every `fit_*` function takes a training [`Dataset`] and returns a
//! [`FittedModel`]. Prediction aligns the input columns to the training
//! columns by name, so column order at prediction time does not matter.

mod adaboost;
mod forest;
mod gbdt;
mod knn;
mod linear;
mod naive_bayes;
mod svc;
mod flm;
mod tree;

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use adaboost::{fit_adaboost, AdaBoostConfig, AdaBoostModel};
pub use flm::{fit_fast_large_margin, FlmConfig, FlmModel};
pub use forest::{fit_random_forest, ForestConfig, ForestModel};
pub use gbdt::{fit_gbdt, BoostConfig, BoostPreset, GbdtModel, Growth, RegNode, RegTree};
pub use knn::{fit_knn, KnnConfig, KnnModel};
pub use linear::{fit_glm, fit_logistic, GlmConfig, GlmModel, LinearModel, LogisticConfig};
pub use naive_bayes::{fit_gaussian_nb, NaiveBayesConfig, NaiveBayesModel};
pub use svc::{fit_svc, scale_gamma, Kernel, SvcConfig, SvcModel};
pub use tree::{fit_decision_tree, Tree, TreeConfig, TreeNode};

use crate::data::Dataset;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::neural_net::MlpModel;

/// How a score becomes a hard label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DecisionRule {
    /// Class 1 iff score >= 0.5.
    Probability,
    /// Class 1 iff score > 0.5; an even vote goes to class 0.
    Majority,
    /// Class 1 iff score >= 0.
    Margin,
}

impl DecisionRule {
    /// Hard label for one score.
    pub fn label(self, score: f64) -> u8 {
        u8::from(match self {
            DecisionRule::Probability => score >= 0.5,
            DecisionRule::Majority => score > 0.5,
            DecisionRule::Margin => score >= 0.0,
        })
    }
}

/// Learned parameters, one variant per algorithm.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "algorithm", content = "model")]
pub enum ModelParams {
    /// CART tree.
    DecisionTree(Tree),
    /// Bagged trees.
    RandomForest(ForestModel),
    /// SAMME ensemble of stumps.
    AdaBoost(AdaBoostModel),
    /// Newton-boosted regression trees.
    Gbdt(GbdtModel),
    /// Stored training set.
    Knn(KnnModel),
    /// Per-class Gaussians.
    NaiveBayes(NaiveBayesModel),
    /// Penalized logistic regression.
    Logistic(LinearModel),
    /// Binomial GLM with logit link.
    Glm(GlmModel),
    /// Kernel support vector classifier.
    Svc(SvcModel),
    /// Linear hinge-loss model.
    FastLargeMargin(FlmModel),
    /// Feed-forward network.
    Mlp(MlpModel),
}

impl ModelParams {
    /// Stable algorithm id.
    pub fn algorithm(&self) -> &'static str {
        match self {
            ModelParams::DecisionTree(_) => "decision_tree",
            ModelParams::RandomForest(_) => "random_forest",
            ModelParams::AdaBoost(_) => "adaboost",
            ModelParams::Gbdt(m) => m.config.preset.map_or("gbdt", BoostPreset::name),
            ModelParams::Knn(_) => "knn",
            ModelParams::NaiveBayes(_) => "naive_bayes",
            ModelParams::Logistic(_) => "logistic_regression",
            ModelParams::Glm(_) => "glm",
            ModelParams::Svc(_) => "svc",
            ModelParams::FastLargeMargin(_) => "fast_large_margin",
            ModelParams::Mlp(_) => "mlp",
        }
    }

    /// Threshold rule matching the score's scale.
    pub fn decision_rule(&self) -> DecisionRule {
        match self {
            ModelParams::Knn(_) => DecisionRule::Majority,
            ModelParams::Svc(_) | ModelParams::FastLargeMargin(_) => DecisionRule::Margin,
            _ => DecisionRule::Probability,
        }
    }

    fn score_row(&self, x: &[f64]) -> f64 {
        match self {
            ModelParams::DecisionTree(t) => t.predict_proba(x),
            ModelParams::RandomForest(m) => m.score(x),
            ModelParams::AdaBoost(m) => m.score(x),
            ModelParams::Gbdt(m) => m.score(x),
            ModelParams::Knn(m) => m.score(x),
            ModelParams::NaiveBayes(m) => m.score(x),
            ModelParams::Logistic(m) => m.score(x),
            ModelParams::Glm(m) => m.linear.score(x),
            ModelParams::Svc(m) => m.decision(x),
            ModelParams::FastLargeMargin(m) => m.decision(x),
            ModelParams::Mlp(m) => m.score(x),
        }
    }
}

/// Trained classifier with the feature names it expects.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FittedModel {
    /// Training columns in training order.
    pub feature_names: Vec<String>,
    /// Learned parameters.
    pub params: ModelParams,
}

impl FittedModel {
    /// Wraps parameters learned on `train`.
    pub fn new(train: &Dataset, params: ModelParams) -> Self {
        Self { feature_names: train.feature_names(), params }
    }

    /// Stable algorithm id.
    pub fn algorithm(&self) -> &'static str {
        self.params.algorithm()
    }

    /// Scores for a matrix whose columns are already in training order.
    pub fn score_matrix(&self, x: &Matrix) -> Result<Vec<f64>> {
        if x.cols() != self.feature_names.len() {
            return Err(Error::Parameter(alloc::format!(
                "{} columns, model expects {}",
                x.cols(),
                self.feature_names.len()
            )));
        }
        Ok(x.iter_rows().map(|r| self.params.score_row(r)).collect())
    }

    /// Class-1 probability, vote fraction or margin per row.
    pub fn predict_score(&self, ds: &Dataset) -> Result<Vec<f64>> {
        self.score_matrix(&self.align(ds)?)
    }

    /// Hard labels per row.
    pub fn predict(&self, ds: &Dataset) -> Result<Vec<u8>> {
        let rule = self.params.decision_rule();
        Ok(self.predict_score(ds)?.into_iter().map(|s| rule.label(s)).collect())
    }

    /// Input features reordered to the training column order.
    fn align(&self, ds: &Dataset) -> Result<Matrix> {
        let names = ds.feature_names();
        let missing: Vec<String> = self.feature_names.iter().filter(|n| !names.contains(n)).cloned().collect();
        let extra: Vec<String> = names.iter().filter(|n| !self.feature_names.contains(n)).cloned().collect();
        if !missing.is_empty() || !extra.is_empty() {
            return Err(Error::FeatureMismatch { missing, extra });
        }
        let order: Vec<usize> =
            self.feature_names.iter().map(|n| names.iter().position(|m| m == n).expect("checked above")).collect();
        if order.iter().enumerate().all(|(i, &j)| i == j) {
            Ok(ds.features().clone())
        } else {
            Ok(ds.features().select_columns(&order))
        }
    }
}

/// Hard labels of `model` on `ds`.
pub fn predict(model: &FittedModel, ds: &Dataset) -> Result<Vec<u8>> {
    model.predict(ds)
}

/// Scores of `model` on `ds`.
pub fn predict_score(model: &FittedModel, ds: &Dataset) -> Result<Vec<f64>> {
    model.predict_score(ds)
}

/// Shared precondition: at least two rows, all finite.
pub(crate) fn check_train(train: &Dataset) -> Result<()> {
    if train.n_rows() < 2 {
        return Err(Error::Parameter(alloc::format!("need at least 2 training rows, got {}", train.n_rows())));
    }
    if train.n_features() == 0 {
        return Err(Error::Parameter("training set has no features".into()));
    }
    Ok(())
}

pub(crate) fn check_finite(x: &Matrix) -> Result<()> {
    if x.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::Parameter("features must be finite".into()));
    }
    Ok(())
}

/// Warns when a single class is present; returns whether that is the case.
pub(crate) fn single_class(train: &Dataset) -> bool {
    let [n0, n1] = train.class_counts();
    let single = n0 == 0 || n1 == 0;
    if single {
        log::warn!("training set holds a single class; fitting a constant model");
    }
    single
}

pub(crate) fn warn_if_unscaled(x: &Matrix, what: &str) {
    let n = x.rows() as f64;
    for (j, m) in x.column_means().iter().enumerate() {
        // 0/1 indicator columns are not scaled
        if x.iter_rows().all(|r| r[j] == 0.0 || r[j] == 1.0) {
            continue;
        }
        let var = x.iter_rows().map(|r| (r[j] - m) * (r[j] - m)).sum::<f64>() / n;
        if m.abs() > 0.5 || var > 4.0 {
            log::warn!("{what} on unstandardized features (column {j})");
            return;
        }
    }
}

pub(crate) fn sigmoid(z: f64) -> f64 {
    #[allow(unused_imports)] // shadowed by inherent methods when std is linked
    use num_traits::Float;
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}
