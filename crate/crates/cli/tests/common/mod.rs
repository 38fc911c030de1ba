#![allow(dead_code)]

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use ehrsev::config::{Algorithm, ClusterMethod, ClusterSpec, ElbowConfig, ExperimentConfig, FeatureSet, ModelSpec};
use ehrsev_core::clustering::Linkage;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

pub const HEADER: &str =
    "HAEMATOCRIT,HAEMOGLOBINS,ERYTHROCYTE,LEUCOCYTE,THROMBOCYTE,MCH,MCHC,MCV,AGE,SEX,SOURCE";

/// Blood-panel-shaped rows: the red-cell columns are strongly correlated
/// with each other and the inpatient class shifts several of them.
pub fn ehr_csv(n: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let z = Normal::new(0.0, 1.0).unwrap();
    let mut out = String::from(HEADER);
    out.push('\n');
    for _ in 0..n {
        let inpatient = rng.gen_bool(0.35);
        let s = if inpatient { 1.0 } else { 0.0 };
        let hct: f64 = 39.0 - 4.0 * s + 4.5 * z.sample(&mut rng);
        let hgb = hct / 3.0 + 0.4 * z.sample(&mut rng);
        let ery = hgb / 3.0 + 0.2 * z.sample(&mut rng);
        let leu = (8.0 + 3.5 * s + 3.0 * z.sample(&mut rng)).max(0.5);
        let thr = (260.0 - 50.0 * s + 70.0 * z.sample(&mut rng)).max(10.0).round();
        let mcv = 86.0 + 6.0 * z.sample(&mut rng);
        let mch = mcv / 3.0 + 0.8 * z.sample(&mut rng);
        let mchc = 100.0 * mch / mcv + 0.5 * z.sample(&mut rng);
        let age = (45.0 + 12.0 * s + 18.0 * z.sample(&mut rng)).round().clamp(1.0, 99.0);
        let sex = if rng.gen_bool(0.5) { "F" } else { "M" };
        let label = if inpatient { "in" } else { "out" };
        let _ = writeln!(
            out,
            "{hct:.1},{hgb:.1},{ery:.2},{leu:.1},{thr},{mch:.1},{mchc:.1},{mcv:.1},{age},{sex},{label}"
        );
    }
    out
}

pub fn write_ehr(dir: &Path, n: usize, seed: u64) -> PathBuf {
    let path = dir.join("ehr.csv");
    fs::write(&path, ehr_csv(n, seed)).unwrap();
    path
}

/// A small experiment touching every output kind.
pub fn small_config(data: &Path, out: &Path) -> ExperimentConfig {
    let mut cfg = ExperimentConfig::new(data, 7);
    cfg.output_dir = out.to_path_buf();
    let mut knn = ModelSpec::new("knn", Algorithm::Knn);
    knn.grid = vec![
        serde_json::from_str(r#"{"k": 3}"#).unwrap(),
        serde_json::from_str(r#"{"k": 9}"#).unwrap(),
    ];
    let mut mlp = ModelSpec::new("mlp", Algorithm::Mlp);
    mlp.params = serde_json::from_str(r#"{"hidden_layers": [8], "epochs": 60, "learning_rate": 0.01}"#).unwrap();
    cfg.models = vec![
        ModelSpec::new("tree", Algorithm::DecisionTree),
        knn,
        ModelSpec::new("glm", Algorithm::Glm),
        mlp,
    ];
    cfg.clustering = vec![
        ClusterSpec { label: "km".into(), features: FeatureSet::All, method: ClusterMethod::Kmeans { k: 2, n_init: 3 } },
        ClusterSpec {
            label: "avg".into(),
            features: FeatureSet::Reduced,
            method: ClusterMethod::Agglomerative { linkage: Linkage::Average, k: 2 },
        },
    ];
    cfg.elbow = Some(ElbowConfig { k_max: 4 });
    cfg
}

/// Relative paths of every file under `dir`, sorted, `/`-separated.
pub fn list_files(dir: &Path) -> Vec<String> {
    fn walk(root: &Path, dir: &Path, out: &mut Vec<String>) {
        for e in fs::read_dir(dir).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                walk(root, &p, out);
            } else {
                let rel = p.strip_prefix(root).unwrap();
                out.push(rel.components().map(|c| c.as_os_str().to_string_lossy().into_owned()).collect::<Vec<_>>().join("/"));
            }
        }
    }
    let mut out = Vec::new();
    walk(dir, dir, &mut out);
    out.sort();
    out
}
