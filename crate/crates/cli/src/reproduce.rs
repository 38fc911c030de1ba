//! Built-in configurations for the published result tables and the
//! reference values they are checked against.

use std::fs;
use std::path::Path;

use ehrsev_core::clustering::Linkage;
use serde_json::{json, Map, Value};

use crate::config::{
    AffinitySpec, Algorithm, ClusterMethod, ClusterSpec, ElbowConfig, ExperimentConfig, FeatureSet, ModelSpec,
    ReferenceCheck,
};
use crate::error::{io_err, CliError, Result};
use crate::experiment::{run_experiment, RunOutcome};

/// Table numbers `reproduce` knows.
pub const TABLES: std::ops::RangeInclusive<u8> = 3..=14;

/// Reference CSV shipped for a table.
pub fn reference_csv(table: u8) -> Option<&'static str> {
    Some(match table {
        3 => include_str!("../references/table_03.csv"),
        4 => include_str!("../references/table_04.csv"),
        5 => include_str!("../references/table_05.csv"),
        6 => include_str!("../references/table_06.csv"),
        7 => include_str!("../references/table_07.csv"),
        8 => include_str!("../references/table_08.csv"),
        9 => include_str!("../references/table_09.csv"),
        10 => include_str!("../references/table_10.csv"),
        11 => include_str!("../references/table_11.csv"),
        12 => include_str!("../references/table_12.csv"),
        13 => include_str!("../references/table_13.csv"),
        14 => include_str!("../references/table_14.csv"),
        _ => return None,
    })
}

/// Produced table a reference is compared with.
pub fn reference_kind(table: u8) -> &'static str {
    match table {
        11 | 13 | 14 => "supervised_metrics",
        12 => "confusion_counts",
        _ => "clustering_metrics",
    }
}

fn obj(v: Value) -> Map<String, Value> {
    match v {
        Value::Object(m) => m,
        _ => unreachable!("literal objects only"),
    }
}

fn grid(key: &str, values: &[Value]) -> Vec<Map<String, Value>> {
    values.iter().map(|v| obj(json!({ key: v }))).collect()
}

fn model(label: &str, algorithm: Algorithm, grid: Vec<Map<String, Value>>) -> ModelSpec {
    ModelSpec { grid, ..ModelSpec::new(label, algorithm) }
}

/// The supervised line-up with its search grids.
pub fn supervised_models() -> Vec<ModelSpec> {
    vec![
        model("svc", Algorithm::Svc, grid("c", &[json!(0.5), json!(1.0), json!(2.0)])),
        model("xgboost", Algorithm::XgboostLike, grid("n_rounds", &[json!(50), json!(100), json!(200)])),
        model("naive_bayes", Algorithm::NaiveBayes, Vec::new()),
        model("lightgbm", Algorithm::LightgbmLike, grid("n_rounds", &[json!(50), json!(100), json!(200)])),
        model("knn", Algorithm::Knn, grid("k", &[json!(5), json!(15), json!(25)])),
        model("decision_tree", Algorithm::DecisionTree, Vec::new()),
        model("catboost", Algorithm::CatboostLike, grid("n_rounds", &[json!(50), json!(100), json!(200)])),
        model("adaboost", Algorithm::Adaboost, Vec::new()),
        model("logistic_regression", Algorithm::LogisticRegression, grid("l2_reg", &[json!(0.1), json!(1.0), json!(10.0)])),
        model("glm", Algorithm::Glm, Vec::new()),
        model("random_forest", Algorithm::RandomForest, Vec::new()),
    ]
}

fn spec(label: &str, features: FeatureSet, method: ClusterMethod) -> ClusterSpec {
    ClusterSpec { label: label.into(), features, method }
}

fn kmeans() -> ClusterMethod {
    ClusterMethod::Kmeans { k: 2, n_init: 10 }
}

fn agglomerative(linkage: Linkage) -> ClusterMethod {
    ClusterMethod::Agglomerative { linkage, k: 2 }
}

fn gmm_default() -> ClusterMethod {
    ClusterMethod::Gmm { k: 2, max_iter: 200, tol: 1e-6, cov_floor: 1e-6 }
}

/// Alternative mixture settings; the source does not say which it changed.
fn gmm_changed() -> ClusterMethod {
    ClusterMethod::Gmm { k: 2, max_iter: 100, tol: 1e-3, cov_floor: 0.1 }
}

fn spectral(affinity: AffinitySpec) -> ClusterMethod {
    ClusterMethod::Spectral { affinity, n_clusters: 2, pca_components: 2, max_points: 600 }
}

const RBF: AffinitySpec = AffinitySpec::Rbf { gamma: None };
const KNN_GRAPH: AffinitySpec = AffinitySpec::NearestNeighbors { n_neighbors: 10 };

fn both(label: &str, method: ClusterMethod) -> [ClusterSpec; 2] {
    [
        spec(&format!("{label}_before"), FeatureSet::All, method.clone()),
        spec(&format!("{label}_after"), FeatureSet::Reduced, method),
    ]
}

/// Experiment config that regenerates `table`.
pub fn table_config(table: u8, dataset: &Path, seed: u64) -> Result<ExperimentConfig> {
    let mut cfg = ExperimentConfig::new(dataset, seed);
    let linkages = [("ward", Linkage::Ward), ("complete", Linkage::Complete), ("average", Linkage::Average)];
    match table {
        3 => {
            cfg.clustering = both("kmeans", kmeans()).into();
            cfg.elbow = Some(ElbowConfig { k_max: 10 });
        }
        4 | 5 => {
            let features = if table == 4 { FeatureSet::All } else { FeatureSet::Reduced };
            cfg.clustering = linkages.iter().map(|(l, k)| spec(l, features, agglomerative(*k))).collect();
        }
        6 | 7 => {
            let features = if table == 6 { FeatureSet::All } else { FeatureSet::Reduced };
            cfg.clustering = vec![spec("gmm_default", features, gmm_default()), spec("gmm_changed", features, gmm_changed())];
        }
        8 => {
            cfg.clustering = vec![
                spec("default_before", FeatureSet::All, spectral(RBF)),
                spec("changed_before", FeatureSet::All, spectral(KNN_GRAPH)),
                spec("default_after", FeatureSet::Reduced, spectral(RBF)),
                spec("changed_after", FeatureSet::Reduced, spectral(KNN_GRAPH)),
            ];
        }
        9 | 10 => {
            let mut runs = Vec::new();
            let mut add = |name: &str, method: ClusterMethod| {
                let [a, b] = both(name, method);
                runs.push(a);
                runs.push(b);
            };
            add("kmeans", kmeans());
            add("ward", agglomerative(Linkage::Ward));
            add("complete", agglomerative(Linkage::Complete));
            add("average", agglomerative(Linkage::Average));
            add("ward_again", agglomerative(Linkage::Ward));
            add("gaussian", gmm_default());
            add("spectral_rbf", spectral(RBF));
            add("spectral_knn", spectral(KNN_GRAPH));
            let names = [
                "kmeans1", "kmeans2", "hierarchical1", "hierarchical2", "hierarchical3", "hierarchical4", "hierarchical5",
                "hierarchical6", "hierarchical7", "hierarchical8", "gaussian1", "gaussian2", "spectral1", "spectral2",
                "spectral3", "spectral4",
            ];
            for (r, n) in runs.iter_mut().zip(names) {
                r.label = n.into();
            }
            cfg.clustering = runs;
        }
        11 | 12 => {
            cfg.models = supervised_models();
            if table == 12 {
                cfg.models.retain(|m| m.label != "glm");
            }
        }
        13 => cfg.models = vec![ModelSpec::new("fast_large_margin", Algorithm::FastLargeMargin)],
        14 => cfg.models = vec![model("mlp", Algorithm::Mlp, grid("epochs", &[json!(10), json!(30), json!(100)]))],
        _ => return Err(CliError::Config(format!("no built-in configuration for table {table}; expected 3..=14"))),
    }
    Ok(cfg)
}

/// Regenerates one table under `out_root/table_NN/` and compares it with
/// the shipped reference, copied to `out_root/references/table_NN.csv`.
pub fn reproduce(table: u8, dataset: &Path, seed: u64, strict: bool, out_root: &Path) -> Result<RunOutcome> {
    let mut cfg = table_config(table, dataset, seed)?;
    cfg.dataset.strict = strict;
    let text = reference_csv(table).expect("table_config accepted the number");
    let ref_dir = out_root.join("references");
    fs::create_dir_all(&ref_dir).map_err(io_err(&ref_dir))?;
    let ref_path = ref_dir.join(format!("table_{table:02}.csv"));
    fs::write(&ref_path, text).map_err(io_err(&ref_path))?;
    let run_dir = out_root.join(format!("table_{table:02}"));
    cfg.references = vec![ReferenceCheck { table: reference_kind(table).into(), path: ref_path, tolerances: Vec::new() }];
    cfg.output_dir = run_dir.clone();
    run_experiment(&cfg, &run_dir)
}
