//! Experiment configuration: JSON document, validation, hashing and the
//! mapping from model specs to library configs.

use std::fs;
use std::path::{Path, PathBuf};

use ehrsev_core::classifiers::{
    AdaBoostConfig, BoostConfig, BoostPreset, FlmConfig, ForestConfig, GlmConfig, KnnConfig, LogisticConfig,
    NaiveBayesConfig, SvcConfig, TreeConfig,
};
use ehrsev_core::clustering::Linkage;
use ehrsev_core::data::CORRELATED_FEATURES;
use ehrsev_core::neural_net::MlpConfig;
use ehrsev_core::preprocess::ReductionPlan;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

use crate::error::{io_err, json_err, CliError, Result};

/// Input file and parsing mode.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetConfig {
    /// CSV path; relative paths resolve against the working directory.
    pub path: PathBuf,
    /// Reject unparseable cells instead of mean-imputing them.
    #[serde(default = "yes")]
    pub strict: bool,
}

fn yes() -> bool {
    true
}

/// Holdout split.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SplitConfig {
    /// Test share in `(0, 1)`.
    pub test_fraction: f64,
    /// Preserve class proportions.
    pub stratified: bool,
}

impl Default for SplitConfig {
    fn default() -> Self {
        Self { test_fraction: 0.2, stratified: true }
    }
}

/// Feature scaling, fit on the training side only.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalerChoice {
    /// Zero mean, unit variance.
    #[default]
    Standard,
    /// Map to `[0, 1]`.
    MinMax,
    /// Leave raw values.
    None,
}

/// Correlation-driven column removal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReductionConfig {
    /// Which columns go.
    pub plan: ReductionPlan,
    /// Train supervised models on the reduced columns.
    pub supervised: bool,
}

impl Default for ReductionConfig {
    fn default() -> Self {
        Self {
            plan: ReductionPlan::DropList { columns: CORRELATED_FEATURES.iter().map(|s| (*s).to_owned()).collect() },
            supervised: true,
        }
    }
}

/// Hyperparameter selection.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TuningConfig {
    /// Cross-validation folds on the training side when a grid is given.
    pub folds: usize,
}

impl Default for TuningConfig {
    fn default() -> Self {
        Self { folds: 3 }
    }
}

/// Supervised algorithm ids.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    /// CART.
    DecisionTree,
    /// Bagged trees.
    RandomForest,
    /// SAMME stumps.
    Adaboost,
    /// Boosting engine, level-wise preset.
    XgboostLike,
    /// Boosting engine, leaf-wise preset.
    LightgbmLike,
    /// Boosting engine, symmetric preset.
    CatboostLike,
    /// Boosting engine, fully configured by `params`.
    Gbdt,
    /// k nearest neighbours.
    Knn,
    /// Gaussian naive Bayes.
    NaiveBayes,
    /// Ridge logistic regression.
    LogisticRegression,
    /// Binomial GLM by IRLS.
    Glm,
    /// Kernel SVC.
    Svc,
    /// Linear hinge-loss model by dual coordinate descent.
    FastLargeMargin,
    /// Feed-forward network.
    Mlp,
}

impl Algorithm {
    /// Id as written in configs and reports.
    pub fn id(self) -> &'static str {
        match self {
            Algorithm::DecisionTree => "decision_tree",
            Algorithm::RandomForest => "random_forest",
            Algorithm::Adaboost => "adaboost",
            Algorithm::XgboostLike => "xgboost_like",
            Algorithm::LightgbmLike => "lightgbm_like",
            Algorithm::CatboostLike => "catboost_like",
            Algorithm::Gbdt => "gbdt",
            Algorithm::Knn => "knn",
            Algorithm::NaiveBayes => "naive_bayes",
            Algorithm::LogisticRegression => "logistic_regression",
            Algorithm::Glm => "glm",
            Algorithm::Svc => "svc",
            Algorithm::FastLargeMargin => "fast_large_margin",
            Algorithm::Mlp => "mlp",
        }
    }
}

/// Fully resolved hyperparameters of one model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "algorithm", content = "params")]
pub enum ModelConfig {
    /// CART.
    DecisionTree(TreeConfig),
    /// Bagged trees.
    RandomForest(ForestConfig),
    /// SAMME stumps.
    Adaboost(AdaBoostConfig),
    /// Boosting engine.
    Gbdt(BoostConfig),
    /// k nearest neighbours.
    Knn(KnnConfig),
    /// Gaussian naive Bayes.
    NaiveBayes(NaiveBayesConfig),
    /// Ridge logistic regression.
    LogisticRegression(LogisticConfig),
    /// Binomial GLM.
    Glm(GlmConfig),
    /// Kernel SVC.
    Svc(SvcConfig),
    /// Linear large-margin model.
    FastLargeMargin(FlmConfig),
    /// Feed-forward network.
    Mlp(MlpConfig),
}

fn to_object<T: Serialize>(v: &T) -> Map<String, Value> {
    match serde_json::to_value(v).expect("configs serialize") {
        Value::Object(m) => m,
        _ => unreachable!("configs are structs"),
    }
}

fn defaults(alg: Algorithm, seed: u64) -> Map<String, Value> {
    let preset = |p: BoostPreset| to_object(&BoostConfig::preset(p));
    match alg {
        Algorithm::DecisionTree => to_object(&TreeConfig::default()),
        Algorithm::RandomForest => to_object(&ForestConfig { seed, ..ForestConfig::default() }),
        Algorithm::Adaboost => to_object(&AdaBoostConfig::default()),
        Algorithm::XgboostLike => preset(BoostPreset::XgboostLike),
        Algorithm::LightgbmLike => preset(BoostPreset::LightgbmLike),
        Algorithm::CatboostLike => preset(BoostPreset::CatboostLike),
        Algorithm::Gbdt => to_object(&BoostConfig { preset: None, ..BoostConfig::preset(BoostPreset::XgboostLike) }),
        Algorithm::Knn => to_object(&KnnConfig::default()),
        Algorithm::NaiveBayes => to_object(&NaiveBayesConfig::default()),
        Algorithm::LogisticRegression => to_object(&LogisticConfig::default()),
        Algorithm::Glm => to_object(&GlmConfig::default()),
        Algorithm::Svc => to_object(&SvcConfig::default()),
        Algorithm::FastLargeMargin => to_object(&FlmConfig { seed, ..FlmConfig::default() }),
        Algorithm::Mlp => to_object(&MlpConfig { seed, ..MlpConfig::default() }),
    }
}

fn overlay(base: &mut Map<String, Value>, over: &Map<String, Value>, label: &str) -> Result<()> {
    for (k, v) in over {
        match base.get_mut(k) {
            Some(slot) => *slot = v.clone(),
            None => {
                let known: Vec<&String> = base.keys().collect();
                return Err(CliError::Config(format!("model {label}: unknown parameter {k:?} (known: {known:?})")));
            }
        }
    }
    Ok(())
}

/// One supervised model in the experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSpec {
    /// Row label in reports and file stem for per-model outputs.
    pub label: String,
    /// Which learner.
    pub algorithm: Algorithm,
    /// Overrides of the algorithm defaults.
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub params: Map<String, Value>,
    /// Alternative overrides on top of `params`, chosen by cross-validated accuracy.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub grid: Vec<Map<String, Value>>,
}

impl ModelSpec {
    /// Spec with default hyperparameters.
    pub fn new(label: &str, algorithm: Algorithm) -> Self {
        Self { label: label.into(), algorithm, params: Map::new(), grid: Vec::new() }
    }

    /// Resolved configs: one per grid entry, or just `params`.
    pub fn candidates(&self, seed: u64) -> Result<Vec<ModelConfig>> {
        let mut base = defaults(self.algorithm, seed);
        overlay(&mut base, &self.params, &self.label)?;
        let merged: Vec<Map<String, Value>> = if self.grid.is_empty() {
            vec![base]
        } else {
            self.grid
                .iter()
                .map(|g| {
                    let mut m = base.clone();
                    overlay(&mut m, g, &self.label).map(|()| m)
                })
                .collect::<Result<_>>()?
        };
        merged.into_iter().map(|m| self.resolve(Value::Object(m))).collect()
    }

    fn resolve(&self, v: Value) -> Result<ModelConfig> {
        let ctx = format!("model {}", self.label);
        let cfg = match self.algorithm {
            Algorithm::DecisionTree => ModelConfig::DecisionTree(serde_json::from_value(v).map_err(json_err(ctx))?),
            Algorithm::RandomForest => ModelConfig::RandomForest(serde_json::from_value(v).map_err(json_err(ctx))?),
            Algorithm::Adaboost => ModelConfig::Adaboost(serde_json::from_value(v).map_err(json_err(ctx))?),
            Algorithm::XgboostLike | Algorithm::LightgbmLike | Algorithm::CatboostLike | Algorithm::Gbdt => {
                ModelConfig::Gbdt(serde_json::from_value(v).map_err(json_err(ctx))?)
            }
            Algorithm::Knn => ModelConfig::Knn(serde_json::from_value(v).map_err(json_err(ctx))?),
            Algorithm::NaiveBayes => ModelConfig::NaiveBayes(serde_json::from_value(v).map_err(json_err(ctx))?),
            Algorithm::LogisticRegression => {
                ModelConfig::LogisticRegression(serde_json::from_value(v).map_err(json_err(ctx))?)
            }
            Algorithm::Glm => ModelConfig::Glm(serde_json::from_value(v).map_err(json_err(ctx))?),
            Algorithm::Svc => ModelConfig::Svc(serde_json::from_value(v).map_err(json_err(ctx))?),
            Algorithm::FastLargeMargin => ModelConfig::FastLargeMargin(serde_json::from_value(v).map_err(json_err(ctx))?),
            Algorithm::Mlp => ModelConfig::Mlp(serde_json::from_value(v).map_err(json_err(ctx))?),
        };
        Ok(cfg)
    }
}

/// Column set a clusterer runs on.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FeatureSet {
    /// Every feature, scaled.
    #[default]
    All,
    /// Scaled features minus the reduction plan's columns.
    Reduced,
}

/// Spectral graph construction.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind", deny_unknown_fields)]
pub enum AffinitySpec {
    /// RBF kernel; `None` uses `1 / (d * mean variance)` of the embedding.
    Rbf {
        /// Kernel width.
        #[serde(default)]
        gamma: Option<f64>,
    },
    /// Symmetrized kNN graph.
    NearestNeighbors {
        /// Neighbours per point.
        n_neighbors: usize,
    },
}

fn default_n_init() -> usize {
    10
}
fn default_two() -> usize {
    2
}
fn default_gmm_iter() -> usize {
    200
}
fn default_gmm_tol() -> f64 {
    1e-6
}
fn default_max_points() -> usize {
    600
}

/// Unsupervised method and its settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "algorithm")]
pub enum ClusterMethod {
    /// Lloyd from k-means++ seeds.
    Kmeans {
        /// Clusters.
        k: usize,
        /// Restarts.
        #[serde(default = "default_n_init")]
        n_init: usize,
    },
    /// Agglomerative clustering cut at `k` clusters.
    Agglomerative {
        /// Merge rule.
        linkage: Linkage,
        /// Clusters.
        #[serde(default = "default_two")]
        k: usize,
    },
    /// Full-covariance Gaussian mixture.
    Gmm {
        /// Components.
        k: usize,
        /// EM iteration cap.
        #[serde(default = "default_gmm_iter")]
        max_iter: usize,
        /// Stop on mean log-likelihood change below this.
        #[serde(default = "default_gmm_tol")]
        tol: f64,
        /// Diagonal loading.
        #[serde(default = "default_gmm_tol")]
        cov_floor: f64,
    },
    /// Spectral clustering on a PCA embedding.
    Spectral {
        /// Graph construction.
        affinity: AffinitySpec,
        /// Clusters.
        #[serde(default = "default_two")]
        n_clusters: usize,
        /// Embedding dimension.
        #[serde(default = "default_two")]
        pca_components: usize,
        /// Seeded subsample size cap; the dense eigensolver is cubic in it.
        #[serde(default = "default_max_points")]
        max_points: usize,
    },
}

/// One clustering run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterSpec {
    /// Row label in the clustering table.
    pub label: String,
    /// Column set.
    #[serde(default)]
    pub features: FeatureSet,
    /// Method.
    #[serde(flatten)]
    pub method: ClusterMethod,
}

/// Elbow curve range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElbowConfig {
    /// Largest k (from 1).
    pub k_max: usize,
}

/// Supervised evaluation metrics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Metric {
    /// `(TP + TN) / n`.
    Accuracy,
    /// `TP / (TP + FP)`.
    Precision,
    /// `TP / (TP + FN)`.
    Recall,
    /// Harmonic mean of precision and recall.
    F1,
    /// Area under the ROC curve.
    Auc,
}

impl Metric {
    /// Column name.
    pub fn name(self) -> &'static str {
        match self {
            Metric::Accuracy => "accuracy",
            Metric::Precision => "precision",
            Metric::Recall => "recall",
            Metric::F1 => "f1",
            Metric::Auc => "auc",
        }
    }
}

fn default_metrics() -> Vec<Metric> {
    vec![Metric::Accuracy, Metric::Precision, Metric::Recall, Metric::F1]
}

/// Produced table to check against a reference file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReferenceCheck {
    /// `supervised_metrics`, `clustering_metrics` or `confusion_counts`.
    pub table: String,
    /// Reference CSV in the report schema, with `# tolerance:` directives.
    pub path: PathBuf,
    /// Extra `metric=value` or `row.metric=value` tolerances.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub tolerances: Vec<String>,
}

fn default_out() -> PathBuf {
    PathBuf::from("out")
}

/// Everything a run needs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Input data.
    pub dataset: DatasetConfig,
    /// Seed for the split, tuning folds and every seeded learner.
    pub seed: u64,
    /// Holdout split.
    #[serde(default)]
    pub split: SplitConfig,
    /// Feature scaling.
    #[serde(default)]
    pub scaler: ScalerChoice,
    /// Column removal.
    #[serde(default)]
    pub reduction: ReductionConfig,
    /// Grid search settings.
    #[serde(default)]
    pub tuning: TuningConfig,
    /// Supervised models, fit in parallel, reported in this order.
    #[serde(default)]
    pub models: Vec<ModelSpec>,
    /// Clustering runs on the whole (scaled) dataset.
    #[serde(default)]
    pub clustering: Vec<ClusterSpec>,
    /// Supervised table columns.
    #[serde(default = "default_metrics")]
    pub metrics: Vec<Metric>,
    /// K-means elbow curves.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elbow: Option<ElbowConfig>,
    /// Comparisons to run after emission.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub references: Vec<ReferenceCheck>,
    /// Output directory.
    #[serde(default = "default_out")]
    pub output_dir: PathBuf,
}

impl ExperimentConfig {
    /// Minimal config: the dataset, a seed and defaults elsewhere.
    pub fn new(path: impl Into<PathBuf>, seed: u64) -> Self {
        Self {
            dataset: DatasetConfig { path: path.into(), strict: true },
            seed,
            split: SplitConfig::default(),
            scaler: ScalerChoice::default(),
            reduction: ReductionConfig::default(),
            tuning: TuningConfig::default(),
            models: Vec::new(),
            clustering: Vec::new(),
            metrics: default_metrics(),
            elbow: None,
            references: Vec::new(),
            output_dir: default_out(),
        }
    }

    /// Parses and validates a JSON document.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(json_err("experiment config"))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads a config file.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        Self::from_json(&text)
    }

    /// Pretty JSON.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes") + "\n"
    }

    /// SHA-256 (hex) of the compact JSON form. Map keys are sorted, so equal
    /// configs hash equally.
    pub fn sha256(&self) -> String {
        let compact = serde_json::to_string(self).expect("config serializes");
        format!("{:x}", Sha256::digest(compact.as_bytes()))
    }

    /// Structural checks that do not need the data.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(CliError::Config(m));
        if !(self.split.test_fraction > 0.0 && self.split.test_fraction < 1.0) {
            return bad(format!("split.test_fraction {} outside (0, 1)", self.split.test_fraction));
        }
        if self.tuning.folds < 2 {
            return bad("tuning.folds must be at least 2".into());
        }
        if let ReductionPlan::Threshold { threshold } = self.reduction.plan {
            if !(threshold > 0.0 && threshold <= 1.0) {
                return bad(format!("reduction threshold {threshold} outside (0, 1]"));
            }
        }
        if self.metrics.is_empty() {
            return bad("metrics list is empty".into());
        }
        let mut labels: Vec<&str> = Vec::new();
        for m in &self.models {
            check_label(&m.label)?;
            if labels.contains(&m.label.as_str()) {
                return bad(format!("duplicate model label {}", m.label));
            }
            labels.push(&m.label);
            m.candidates(self.seed)?;
        }
        let mut labels: Vec<&str> = Vec::new();
        for c in &self.clustering {
            check_label(&c.label)?;
            if labels.contains(&c.label.as_str()) {
                return bad(format!("duplicate clustering label {}", c.label));
            }
            labels.push(&c.label);
            let ok = match &c.method {
                ClusterMethod::Kmeans { k, n_init } => *k > 0 && *n_init > 0,
                ClusterMethod::Agglomerative { k, .. } => *k > 0,
                ClusterMethod::Gmm { k, max_iter, tol, cov_floor } => *k > 0 && *max_iter > 0 && *tol > 0.0 && *cov_floor >= 0.0,
                ClusterMethod::Spectral { n_clusters, pca_components, max_points, affinity } => {
                    let aff = match affinity {
                        AffinitySpec::Rbf { gamma } => gamma.is_none_or(|g| g > 0.0),
                        AffinitySpec::NearestNeighbors { n_neighbors } => *n_neighbors > 0,
                    };
                    aff && *n_clusters > 0 && *pca_components > 0 && *max_points >= *n_clusters
                }
            };
            if !ok {
                return bad(format!("clustering {}: invalid parameters", c.label));
            }
        }
        if let Some(e) = self.elbow {
            if e.k_max == 0 {
                return bad("elbow.k_max must be positive".into());
            }
        }
        for r in &self.references {
            if !["supervised_metrics", "clustering_metrics", "confusion_counts"].contains(&r.table.as_str()) {
                return bad(format!("unknown reference table {}", r.table));
            }
        }
        Ok(())
    }
}

fn check_label(label: &str) -> Result<()> {
    let ok = !label.is_empty() && label.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-');
    if ok {
        Ok(())
    } else {
        Err(CliError::Config(format!("label {label:?} must be non-empty ASCII letters, digits, '_' or '-'")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new("data/ehr.csv", 42);
        let mut svc = ModelSpec::new("svc", Algorithm::Svc);
        svc.grid = vec![
            serde_json::from_str(r#"{"c": 0.5}"#).unwrap(),
            serde_json::from_str(r#"{"c": 2.0}"#).unwrap(),
        ];
        cfg.models = vec![svc, ModelSpec::new("lgbm", Algorithm::LightgbmLike)];
        cfg.clustering = vec![ClusterSpec {
            label: "spec".into(),
            features: FeatureSet::Reduced,
            method: ClusterMethod::Spectral {
                affinity: AffinitySpec::NearestNeighbors { n_neighbors: 10 },
                n_clusters: 2,
                pca_components: 2,
                max_points: 300,
            },
        }];
        cfg
    }

    #[test]
    fn json_round_trip_is_lossless() {
        let cfg = sample();
        let back = ExperimentConfig::from_json(&cfg.to_json()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.sha256(), cfg.sha256());
        let mut other = cfg.clone();
        other.seed = 43;
        assert_ne!(other.sha256(), cfg.sha256());
    }

    #[test]
    fn grid_overrides_defaults() {
        let cfg = sample();
        let c = cfg.models[0].candidates(42).unwrap();
        assert_eq!(c.len(), 2);
        match &c[1] {
            ModelConfig::Svc(s) => {
                assert_eq!(s.c, 2.0);
                assert_eq!(s.tol, SvcConfig::default().tol);
            }
            other => panic!("{other:?}"),
        }
        match &cfg.models[1].candidates(42).unwrap()[0] {
            ModelConfig::Gbdt(b) => assert_eq!(b.preset, Some(BoostPreset::LightgbmLike)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn seeded_learners_take_the_experiment_seed() {
        let spec = ModelSpec::new("rf", Algorithm::RandomForest);
        match &spec.candidates(9).unwrap()[0] {
            ModelConfig::RandomForest(f) => assert_eq!(f.seed, 9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_parameters_and_labels_are_rejected() {
        let mut cfg = sample();
        cfg.models[0].params.insert("cost".into(), Value::from(1.0));
        assert!(matches!(cfg.validate(), Err(CliError::Config(_))));
        let mut cfg = sample();
        cfg.models[1].label = "svc".into();
        assert!(cfg.validate().is_err());
        assert!(ExperimentConfig::from_json(r#"{"dataset": {"path": "x"}, "seed": 1, "colour": 2}"#).is_err());
    }

    #[test]
    fn minimal_document_gets_defaults() {
        let cfg = ExperimentConfig::from_json(r#"{"dataset": {"path": "x.csv"}, "seed": 3}"#).unwrap();
        assert!(cfg.dataset.strict);
        assert_eq!(cfg.split, SplitConfig::default());
        assert_eq!(cfg.metrics.len(), 4);
        assert_eq!(cfg.output_dir, PathBuf::from("out"));
    }
}
