//! The end-to-end pipeline behind `run` and `reproduce`.
//!
//! Supervised side: load, split, fit the scaler on the training rows, drop
//! the configured columns, tune each model by k-fold accuracy on the
//! training rows, refit, score the held-out rows. Unsupervised side: scale
//! the whole dataset and cluster it. Every file written is listed in
//! `manifest.json`, which is written last (also on failure).

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::thread;

use ehrsev_core::classifiers::{
    fit_adaboost, fit_decision_tree, fit_fast_large_margin, fit_gaussian_nb, fit_gbdt, fit_glm, fit_knn, fit_logistic,
    fit_random_forest, fit_svc, FittedModel, ModelParams,
};
use ehrsev_core::clustering::{
    default_gamma, elbow_curve, fit_agglomerative, fit_gmm, fit_kmeans, fit_spectral, Affinity, GmmConfig, GmmParams,
    KmeansConfig, MergeTree, SpectralConfig,
};
use ehrsev_core::data::{holdout_positions, kfold_splits, stratified_split, Dataset, SplitSpec};
use ehrsev_core::metrics::{align_clusters, bic, confusion, gaussian_log_likelihood, roc_auc, scores, silhouette, ConfusionMatrix};
use ehrsev_core::neural_net::fit_mlp;
use ehrsev_core::preprocess::{apply_scaler, correlation_matrix, fit_minmax, fit_standardizer, pca_transform, reduce_features, ReductionPlan};
use ehrsev_core::Matrix;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::{AffinitySpec, ClusterMethod, ExperimentConfig, FeatureSet, Metric, ModelConfig, ModelSpec, ScalerChoice};
use crate::error::{io_err, json_err, CliError, Result};
use crate::io::load_dataset;
use crate::report::{compare_to_reference, Comparison, Provenance, ReportTable, Tolerances};

/// Columns of `clustering_metrics.csv`.
pub const CLUSTERING_HEADERS: [&str; 8] =
    ["accuracy", "precision", "recall", "f1", "silhouette", "inertia", "log_likelihood", "bic"];

/// Manifest format version.
pub const MANIFEST_VERSION: u32 = 1;

/// Fits one resolved model configuration.
pub fn fit_model(cfg: &ModelConfig, train: &Dataset) -> Result<FittedModel> {
    let m = match cfg {
        ModelConfig::DecisionTree(c) => fit_decision_tree(train, c)?,
        ModelConfig::RandomForest(c) => fit_random_forest(train, c)?,
        ModelConfig::Adaboost(c) => fit_adaboost(train, c)?,
        ModelConfig::Gbdt(c) => fit_gbdt(train, c)?,
        ModelConfig::Knn(c) => fit_knn(train, c)?,
        ModelConfig::NaiveBayes(c) => fit_gaussian_nb(train, c)?,
        ModelConfig::LogisticRegression(c) => fit_logistic(train, c)?,
        ModelConfig::Glm(c) => fit_glm(train, c)?,
        ModelConfig::Svc(c) => fit_svc(train, c)?,
        ModelConfig::FastLargeMargin(c) => fit_fast_large_margin(train, c)?,
        ModelConfig::Mlp(c) => FittedModel::new(train, ModelParams::Mlp(fit_mlp(train, c)?)),
    };
    Ok(m)
}

/// Scaling and column removal learned on training rows, replayable on new rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Preprocessing {
    /// Scaler parameters, if any.
    pub scaler: Option<ehrsev_core::preprocess::ScalerParams>,
    /// Columns removed after scaling.
    pub dropped_features: Vec<String>,
}

impl Preprocessing {
    /// Fits on `train` per the config.
    pub fn fit(cfg: &ExperimentConfig, train: &Dataset, reduce: bool) -> Result<Self> {
        let scaler = fit_scaler(cfg.scaler, train);
        let dropped_features = if reduce {
            let scaled = match &scaler {
                Some(p) => apply_scaler(train, p)?,
                None => train.clone(),
            };
            reduce_features(&scaled, &cfg.reduction.plan)?.dropped
        } else {
            Vec::new()
        };
        Ok(Self { scaler, dropped_features })
    }

    /// Scales then drops columns.
    pub fn apply(&self, ds: &Dataset) -> Result<Dataset> {
        let scaled = match &self.scaler {
            Some(p) => apply_scaler(ds, p)?,
            None => ds.clone(),
        };
        if self.dropped_features.is_empty() {
            return Ok(scaled);
        }
        let plan = ReductionPlan::DropList { columns: self.dropped_features.clone() };
        Ok(reduce_features(&scaled, &plan)?.dataset)
    }
}

fn fit_scaler(choice: ScalerChoice, ds: &Dataset) -> Option<ehrsev_core::preprocess::ScalerParams> {
    match choice {
        ScalerChoice::Standard => Some(fit_standardizer(ds)),
        ScalerChoice::MinMax => Some(fit_minmax(ds)),
        ScalerChoice::None => None,
    }
}

/// One stage as recorded in the manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    /// Stage name.
    pub name: String,
    /// `ok` or `failed`.
    pub status: String,
}

/// One emitted file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileRecord {
    /// Path relative to the output directory, `/`-separated.
    pub path: String,
    /// SHA-256 of the contents; absent for the manifest itself.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sha256: Option<String>,
}

/// Hyperparameter choice for one model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Selection {
    /// Model label.
    pub label: String,
    /// Algorithm id of the fitted model.
    pub algorithm: String,
    /// Index of the chosen candidate.
    pub chosen: usize,
    /// Mean cross-validated accuracy per candidate (empty without a grid).
    pub cv_accuracy: Vec<f64>,
    /// Resolved configuration that was refit.
    pub config: ModelConfig,
}

/// Run record written as `manifest.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    /// Manifest format version.
    pub version: u32,
    /// Version of the tool that wrote it.
    pub tool_version: String,
    /// Experiment seed.
    pub seed: u64,
    /// Hash of the config.
    pub config_sha256: String,
    /// Wall-clock time at the start of the run (RFC 3339).
    pub timestamp: String,
    /// `ok` or `failed`.
    pub status: String,
    /// Stage that failed, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failed_stage: Option<String>,
    /// Error text of the failure, if any.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Stages in execution order.
    pub stages: Vec<StageRecord>,
    /// Every file in the output directory, including this one.
    pub files: Vec<FileRecord>,
    /// Hyperparameter choices.
    pub selections: Vec<Selection>,
    /// Columns removed before supervised training.
    pub dropped_features: Vec<String>,
}

impl Manifest {
    /// Reads `manifest.json` from a run directory.
    pub fn read(dir: &Path) -> Result<Self> {
        let path = dir.join("manifest.json");
        let text = fs::read_to_string(&path).map_err(io_err(&path))?;
        serde_json::from_str(&text).map_err(json_err(path.display().to_string()))
    }
}

/// Produced tables of a successful run.
#[derive(Debug, Clone)]
pub struct RunOutcome {
    /// Written manifest.
    pub manifest: Manifest,
    /// Held-out metrics per model.
    pub supervised: ReportTable,
    /// Correct and total held-out predictions per model.
    pub confusion_counts: ReportTable,
    /// Aligned metrics per clustering run.
    pub clustering: ReportTable,
    /// Reference comparisons, keyed by reference file stem.
    pub comparisons: Vec<(String, Comparison)>,
}

impl RunOutcome {
    /// True when every configured comparison passed.
    pub fn comparisons_passed(&self) -> bool {
        self.comparisons.iter().all(|(_, c)| c.all_passed())
    }
}

struct Emitter {
    root: PathBuf,
    files: Vec<String>,
}

impl Emitter {
    fn write(&mut self, rel: &str, bytes: &[u8]) -> Result<()> {
        let path = self.root.join(rel);
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(io_err(parent))?;
        }
        fs::write(&path, bytes).map_err(io_err(&path))?;
        if !self.files.iter().any(|f| f == rel) {
            self.files.push(rel.to_owned());
        }
        Ok(())
    }

    fn records(&self) -> Result<Vec<FileRecord>> {
        let mut files: Vec<&String> = self.files.iter().collect();
        files.sort();
        let mut out = Vec::with_capacity(files.len() + 1);
        for rel in files {
            let path = self.root.join(rel);
            let bytes = fs::read(&path).map_err(io_err(&path))?;
            out.push(FileRecord { path: rel.clone(), sha256: Some(format!("{:x}", Sha256::digest(&bytes))) });
        }
        out.push(FileRecord { path: "manifest.json".into(), sha256: None });
        Ok(out)
    }
}

/// Empties a directory left by an earlier run: the files listed in its
/// manifest are removed, anything else is an error.
fn prepare_output(dir: &Path) -> Result<()> {
    if !dir.exists() {
        return fs::create_dir_all(dir).map_err(io_err(dir));
    }
    let is_empty = |d: &Path| fs::read_dir(d).map(|mut it| it.next().is_none()).map_err(io_err(d));
    if is_empty(dir)? {
        return Ok(());
    }
    let manifest = Manifest::read(dir).map_err(|_| {
        CliError::Config(format!("output directory {} is not empty and holds no manifest from an earlier run", dir.display()))
    })?;
    let mut parents = Vec::new();
    for f in &manifest.files {
        let path = dir.join(&f.path);
        match fs::remove_file(&path) {
            Ok(()) => {}
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => {}
            Err(e) => return Err(CliError::Io { path, source: e }),
        }
        if let Some(p) = Path::new(&f.path).parent().filter(|p| !p.as_os_str().is_empty()) {
            parents.push(dir.join(p));
        }
    }
    parents.sort();
    parents.dedup();
    for p in parents.iter().rev() {
        if p.exists() && is_empty(p)? {
            fs::remove_dir(p).map_err(io_err(p))?;
        }
    }
    if !is_empty(dir)? {
        return Err(CliError::Config(format!("output directory {} holds files not written by the earlier run", dir.display())));
    }
    Ok(())
}

struct Run<'a> {
    cfg: &'a ExperimentConfig,
    out: Emitter,
    provenance: Provenance,
    stages: Vec<StageRecord>,
    selections: Vec<Selection>,
    dropped: Vec<String>,
}

impl Run<'_> {
    fn stage<T>(&mut self, name: &str, f: impl FnOnce(&mut Self) -> Result<T>) -> Result<T> {
        log::info!("stage {name}");
        match f(self) {
            Ok(v) => {
                self.stages.push(StageRecord { name: name.into(), status: "ok".into() });
                Ok(v)
            }
            Err(e) => {
                self.stages.push(StageRecord { name: name.into(), status: "failed".into() });
                Err(CliError::Stage { stage: name.into(), source: Box::new(e) })
            }
        }
    }

    fn table(&self, name: &str, headers: &[&str]) -> ReportTable {
        let mut t = ReportTable::new(name, headers);
        t.provenance = Some(self.provenance.clone());
        t
    }

    fn manifest(&self, failure: Option<&CliError>) -> Result<Manifest> {
        let (failed_stage, error) = match failure {
            Some(CliError::Stage { stage, source }) => (Some(stage.clone()), Some(source.to_string())),
            Some(e) => (None, Some(e.to_string())),
            None => (None, None),
        };
        let manifest = Manifest {
            version: MANIFEST_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").into(),
            seed: self.cfg.seed,
            config_sha256: self.provenance.config_sha256.clone(),
            timestamp: self.provenance.timestamp.clone().unwrap_or_default(),
            status: if failure.is_some() { "failed" } else { "ok" }.into(),
            failed_stage,
            error,
            stages: self.stages.clone(),
            files: self.out.records()?,
            selections: self.selections.clone(),
            dropped_features: self.dropped.clone(),
        };
        let path = self.out.root.join("manifest.json");
        let text = serde_json::to_string_pretty(&manifest).map_err(json_err("manifest"))? + "\n";
        fs::write(&path, text).map_err(io_err(&path))?;
        Ok(manifest)
    }
}

/// Runs the experiment and writes every artifact into `out_dir`.
///
/// A failing stage still leaves a manifest with `status: failed`; the
/// error is returned as [`CliError::Stage`].
pub fn run_experiment(cfg: &ExperimentConfig, out_dir: &Path) -> Result<RunOutcome> {
    cfg.validate()?;
    prepare_output(out_dir)?;
    let provenance = Provenance {
        seed: cfg.seed,
        config_sha256: cfg.sha256(),
        timestamp: Some(chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)),
    };
    let mut run = Run {
        cfg,
        out: Emitter { root: out_dir.to_path_buf(), files: Vec::new() },
        provenance,
        stages: Vec::new(),
        selections: Vec::new(),
        dropped: Vec::new(),
    };
    match pipeline(&mut run) {
        Ok((supervised, confusion_counts, clustering, comparisons)) => {
            let manifest = run.manifest(None)?;
            Ok(RunOutcome { manifest, supervised, confusion_counts, clustering, comparisons })
        }
        Err(e) => {
            if let Err(m) = run.manifest(Some(&e)) {
                log::error!("could not write the failure manifest: {m}");
            }
            Err(e)
        }
    }
}

type Tables = (ReportTable, ReportTable, ReportTable, Vec<(String, Comparison)>);

fn pipeline(run: &mut Run<'_>) -> Result<Tables> {
    let cfg = run.cfg;
    run.out.write("config.json", cfg.to_json().as_bytes()).map_err(|e| CliError::Stage { stage: "config".into(), source: Box::new(e) })?;
    let data = run.stage("load", |_| load_dataset(&cfg.dataset.path, cfg.dataset.strict))?;
    run.stage("correlation", |r| {
        let corr = correlation_matrix(&data)?;
        r.out.write("correlation.csv", correlation_csv(&corr.names, &corr.values).as_bytes())
    })?;

    let mut supervised = run.table("supervised_metrics", &cfg.metrics.iter().map(|m| m.name()).collect::<Vec<_>>());
    let mut counts = run.table("confusion_counts", &["correct", "total"]);
    if !cfg.models.is_empty() {
        let (train, test) = run.stage("split", |_| {
            let spec = SplitSpec { test_fraction: cfg.split.test_fraction, stratified: cfg.split.stratified, seed: cfg.seed };
            Ok(stratified_split(&data, &spec)?)
        })?;
        let (train, test) = run.stage("preprocess", |r| {
            let prep = Preprocessing::fit(cfg, &train, cfg.reduction.supervised)?;
            r.dropped = prep.dropped_features.clone();
            Ok((prep.apply(&train)?, prep.apply(&test)?))
        })?;
        let results = run.stage("supervised", |_| train_all(cfg, &train, &test))?;
        run.stage("supervised_outputs", |r| {
            for res in &results {
                emit_model(r, res, &mut supervised, &mut counts)?;
            }
            r.out.write("supervised_metrics.csv", supervised.to_csv().as_bytes())?;
            r.out.write("confusion_counts.csv", counts.to_csv().as_bytes())
        })?;
        run.selections = results.into_iter().map(|r| r.selection).collect();
    }

    let mut clustering = run.table("clustering_metrics", &CLUSTERING_HEADERS);
    if !cfg.clustering.is_empty() || cfg.elbow.is_some() {
        let scaler = fit_scaler(cfg.scaler, &data);
        let scaled = match &scaler {
            Some(p) => apply_scaler(&data, p)?,
            None => data.clone(),
        };
        let reduced = run.stage("clustering_reduction", |_| Ok(reduce_features(&scaled, &cfg.reduction.plan)?.dataset))?;
        if let Some(e) = cfg.elbow {
            run.stage("elbow", |r| {
                let mut csv = String::from("features,k,inertia\n");
                for (name, ds) in [("raw", &data), ("scaled", &scaled), ("scaled_reduced", &reduced)] {
                    let k_max = e.k_max.min(ds.n_rows());
                    for p in elbow_curve(ds.features(), 1..=k_max, cfg.seed)? {
                        csv.push_str(&format!("{name},{},{}\n", p.k, p.inertia));
                    }
                }
                r.out.write("elbow.csv", csv.as_bytes())
            })?;
        }
        if !cfg.clustering.is_empty() {
            run.stage("clustering", |r| {
                let mut dendrogram_written = false;
                for spec in &cfg.clustering {
                    let ds = match spec.features {
                        FeatureSet::All => &scaled,
                        FeatureSet::Reduced => &reduced,
                    };
                    log::info!("clustering {}", spec.label);
                    let res = cluster(&spec.method, ds, cfg.seed)?;
                    if let (Some(tree), false) = (&res.tree, dendrogram_written) {
                        let doc = Dendrogram { label: spec.label.clone(), features: ds.feature_names(), tree: tree.clone() };
                        let text = serde_json::to_string_pretty(&doc).map_err(json_err("dendrogram"))? + "\n";
                        r.out.write("dendrogram.json", text.as_bytes())?;
                        dendrogram_written = true;
                    }
                    clustering.push(&spec.label, res.values);
                }
                r.out.write("clustering_metrics.csv", clustering.to_csv().as_bytes())
            })?;
        }
    }

    let comparisons = run.stage("compare", |r| {
        let mut out = Vec::new();
        for check in &cfg.references {
            let actual = match check.table.as_str() {
                "supervised_metrics" => &supervised,
                "confusion_counts" => &counts,
                _ => &clustering,
            };
            let text = fs::read_to_string(&check.path).map_err(io_err(&check.path))?;
            let (reference, directives) = ReportTable::parse_csv(&text)?;
            let mut tol = Tolerances::from_directives(&directives)?;
            if tol.per_metric.is_empty() && tol.per_cell.is_empty() {
                tol = if check.table == "clustering_metrics" { Tolerances::clustering() } else { Tolerances::supervised() };
            }
            for t in &check.tolerances {
                tol.set(t).map_err(CliError::Compare)?;
            }
            let cmp = compare_to_reference(actual, &reference, &tol)?;
            let stem = check.path.file_stem().map_or_else(|| check.table.clone(), |s| s.to_string_lossy().into_owned());
            log::info!("{stem}: {}", cmp.summary());
            r.out.write(&format!("comparison/{stem}.csv"), cmp.to_csv().as_bytes())?;
            out.push((stem, cmp));
        }
        Ok(out)
    })?;
    Ok((supervised, counts, clustering, comparisons))
}

fn correlation_csv(names: &[String], values: &Matrix) -> String {
    let mut s = String::from("feature");
    for n in names {
        s.push(',');
        s.push_str(n);
    }
    s.push('\n');
    for (i, n) in names.iter().enumerate() {
        s.push_str(n);
        for j in 0..names.len() {
            s.push_str(&format!(",{}", values[(i, j)]));
        }
        s.push('\n');
    }
    s
}

struct ModelResult {
    label: String,
    model: FittedModel,
    selection: Selection,
    confusion: ConfusionMatrix,
    scores: Vec<f64>,
    truth: Vec<u8>,
}

/// Fits every model on its own thread; results come back in config order and
/// the first failure in that order is reported.
fn train_all(cfg: &ExperimentConfig, train: &Dataset, test: &Dataset) -> Result<Vec<ModelResult>> {
    thread::scope(|s| {
        let handles: Vec<_> = cfg.models.iter().map(|spec| s.spawn(move || train_one(cfg, spec, train, test))).collect();
        handles
            .into_iter()
            .zip(&cfg.models)
            .map(|(h, spec)| {
                h.join().unwrap_or_else(|_| Err(CliError::Model(format!("training {} panicked", spec.label))))
            })
            .collect()
    })
}

/// Mean accuracy over `folds` shuffled folds of the (already preprocessed)
/// training rows.
pub fn cross_validate(cfg: &ModelConfig, train: &Dataset, folds: usize, seed: u64) -> Result<f64> {
    let mut total = 0.0;
    let splits = kfold_splits(train.n_rows(), folds, seed)?;
    for fold in &splits {
        let model = fit_model(cfg, &train.subset(&fold.train))?;
        let val = train.subset(&fold.validation);
        let pred = model.predict(&val)?;
        total += confusion(&pred, val.labels())?.correct() as f64 / val.n_rows() as f64;
    }
    Ok(total / splits.len() as f64)
}

fn train_one(cfg: &ExperimentConfig, spec: &ModelSpec, train: &Dataset, test: &Dataset) -> Result<ModelResult> {
    let wrap = |e: CliError| CliError::Model(format!("{}: {e}", spec.label));
    let candidates = spec.candidates(cfg.seed)?;
    let mut cv_accuracy = Vec::new();
    let mut chosen = 0;
    if candidates.len() > 1 {
        for c in &candidates {
            cv_accuracy.push(cross_validate(c, train, cfg.tuning.folds, cfg.seed).map_err(wrap)?);
        }
        for (i, a) in cv_accuracy.iter().enumerate() {
            if *a > cv_accuracy[chosen] {
                chosen = i;
            }
        }
        log::info!("{}: candidate {chosen} chosen, cv accuracy {:?}", spec.label, cv_accuracy);
    }
    let config = candidates[chosen].clone();
    let model = fit_model(&config, train).map_err(wrap)?;
    let scores = model.predict_score(test)?;
    let rule = model.params.decision_rule();
    let pred: Vec<u8> = scores.iter().map(|&s| rule.label(s)).collect();
    let confusion = confusion(&pred, test.labels())?;
    let selection =
        Selection { label: spec.label.clone(), algorithm: model.algorithm().into(), chosen, cv_accuracy, config };
    Ok(ModelResult { label: spec.label.clone(), model, selection, confusion, scores, truth: test.labels().to_vec() })
}

#[derive(Serialize)]
struct ConfusionDoc<'a> {
    model: &'a str,
    algorithm: &'a str,
    #[serde(flatten)]
    counts: &'a ConfusionMatrix,
    total: usize,
    correct: usize,
}

fn emit_model(run: &mut Run<'_>, res: &ModelResult, table: &mut ReportTable, counts: &mut ReportTable) -> Result<()> {
    let s = scores(&res.confusion)?;
    let roc = roc_auc(&res.scores, &res.truth).ok();
    let values = run
        .cfg
        .metrics
        .iter()
        .map(|m| match m {
            Metric::Accuracy => Some(s.accuracy),
            Metric::Precision => Some(s.precision),
            Metric::Recall => Some(s.recall),
            Metric::F1 => Some(s.f1),
            Metric::Auc => roc.as_ref().map(|r| r.auc),
        })
        .collect();
    table.push(&res.label, values);
    counts.push(&res.label, vec![Some(res.confusion.correct() as f64), Some(res.confusion.total() as f64)]);

    let doc = ConfusionDoc {
        model: &res.label,
        algorithm: res.model.algorithm(),
        counts: &res.confusion,
        total: res.confusion.total(),
        correct: res.confusion.correct(),
    };
    let text = serde_json::to_string_pretty(&doc).map_err(json_err("confusion"))? + "\n";
    run.out.write(&format!("confusion/{}.json", res.label), text.as_bytes())?;
    if let Some(roc) = roc {
        let mut csv = String::from("fpr,tpr,threshold\n");
        for p in &roc.points {
            csv.push_str(&format!("{},{},{}\n", p.fpr, p.tpr, p.threshold));
        }
        run.out.write(&format!("roc/{}.csv", res.label), csv.as_bytes())?;
    }
    if let ModelParams::Mlp(m) = &res.model.params {
        let mut csv = String::from("epoch,loss\n");
        for (i, l) in m.loss_trace.iter().enumerate() {
            csv.push_str(&format!("{},{l}\n", i + 1));
        }
        run.out.write(&format!("loss/{}.csv", res.label), csv.as_bytes())?;
    }
    Ok(())
}

#[derive(Serialize)]
struct Dendrogram {
    label: String,
    features: Vec<String>,
    #[serde(flatten)]
    tree: MergeTree,
}

/// Metrics of one clustering run in [`CLUSTERING_HEADERS`] order, plus the
/// merge tree for agglomerative runs.
pub struct ClusterOutcome {
    /// One value per header.
    pub values: Vec<Option<f64>>,
    /// Merge tree, agglomerative only.
    pub tree: Option<MergeTree>,
}

/// Runs one clustering method on `ds` and scores it against the labels.
pub fn cluster(method: &ClusterMethod, ds: &Dataset, seed: u64) -> Result<ClusterOutcome> {
    let x = ds.features();
    let mut inertia = None;
    let mut ll = None;
    let mut bic_v = None;
    let mut tree = None;
    let (points, truth, assignments) = match method {
        ClusterMethod::Kmeans { k, n_init } => {
            let fit = fit_kmeans(x, &KmeansConfig { n_init: *n_init, ..KmeansConfig::new(*k) }, seed)?;
            inertia = Some(fit.inertia);
            (x.clone(), ds.labels().to_vec(), fit.assignments)
        }
        ClusterMethod::Agglomerative { linkage, k } => {
            let fit = fit_agglomerative(x, *linkage, *k)?;
            tree = Some(fit.tree);
            (x.clone(), ds.labels().to_vec(), fit.assignments)
        }
        ClusterMethod::Gmm { k, max_iter, tol, cov_floor } => {
            let cfg = GmmConfig { k: *k, max_iter: *max_iter, tol: *tol, cov_floor: *cov_floor };
            let fit = fit_gmm(x, &cfg, seed)?;
            let l = gaussian_log_likelihood(x, &fit.params)?;
            ll = Some(l);
            bic_v = Some(bic(l, fit.params.n_params(), x.rows()));
            (x.clone(), ds.labels().to_vec(), fit.assignments)
        }
        ClusterMethod::Spectral { affinity, n_clusters, pca_components, max_points } => {
            let pca = pca_transform(ds, *pca_components)?;
            let sample = if ds.n_rows() > *max_points {
                let spec = SplitSpec { test_fraction: *max_points as f64 / ds.n_rows() as f64, stratified: true, seed };
                pca.dataset.subset(&holdout_positions(ds.labels(), &spec)?)
            } else {
                pca.dataset
            };
            let pts = sample.features().clone();
            let affinity = match *affinity {
                AffinitySpec::Rbf { gamma } => Affinity::Rbf { gamma: gamma.unwrap_or_else(|| default_gamma(&pts)) },
                AffinitySpec::NearestNeighbors { n_neighbors } => Affinity::NearestNeighbors { n_neighbors },
            };
            let cfg = SpectralConfig { affinity, n_clusters: *n_clusters, pca_components: *pca_components };
            let fit = fit_spectral(&pts, &cfg, seed)?;
            let params = hard_gaussians(&pts, &fit.assignments, *n_clusters);
            let l = gaussian_log_likelihood(&pts, &params)?;
            ll = Some(l);
            bic_v = Some(bic(l, params.n_params(), pts.rows()));
            (pts, sample.labels().to_vec(), fit.assignments)
        }
    };
    let aligned = align_clusters(&assignments, &truth)?;
    let sil = silhouette(&points, &assignments).ok().map(|s| s.mean);
    let s = aligned.scores;
    Ok(ClusterOutcome {
        values: vec![Some(s.accuracy), Some(s.precision), Some(s.recall), Some(s.f1), sil, inertia, ll, bic_v],
        tree,
    })
}

/// Maximum-likelihood Gaussian per cluster of a hard partition, with a
/// small diagonal floor so singleton clusters stay proper.
fn hard_gaussians(x: &Matrix, assignments: &[usize], k: usize) -> GmmParams {
    const FLOOR: f64 = 1e-6;
    let (n, d) = (x.rows(), x.cols());
    let mut weights = Vec::new();
    let mut means = Matrix::zeros(k, d);
    let mut covariances = Vec::new();
    let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &a) in assignments.iter().enumerate() {
        members.entry(a).or_default().push(i);
    }
    let mut row = 0;
    for c in 0..k {
        let Some(rows) = members.get(&c) else { continue };
        let sub = x.select_rows(rows);
        weights.push(rows.len() as f64 / n as f64);
        let mut cov = sub.covariance();
        for j in 0..d {
            cov[(j, j)] += FLOOR;
        }
        means.row_mut(row).copy_from_slice(&sub.column_means());
        covariances.push(cov);
        row += 1;
    }
    let used: Vec<usize> = (0..row).collect();
    GmmParams { weights, means: means.select_rows(&used), covariances, log_likelihood_trace: Vec::new() }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hard_gaussians_of_two_groups() {
        let x = Matrix::from_rows(&[[0.0], [2.0], [10.0], [12.0], [14.0]]).unwrap();
        let p = hard_gaussians(&x, &[0, 0, 1, 1, 1], 2);
        assert_eq!(p.weights, vec![0.4, 0.6]);
        assert_eq!(p.means.row(0), &[1.0]);
        assert_eq!(p.means.row(1), &[12.0]);
        assert!((p.covariances[0][(0, 0)] - (1.0 + 1e-6)).abs() < 1e-12);
        assert!((p.covariances[1][(0, 0)] - (8.0 / 3.0 + 1e-6)).abs() < 1e-12);
    }

    #[test]
    fn empty_cluster_ids_are_skipped() {
        let x = Matrix::from_rows(&[[0.0], [1.0]]).unwrap();
        let p = hard_gaussians(&x, &[2, 2], 3);
        assert_eq!(p.weights, vec![1.0]);
        assert_eq!(p.means.rows(), 1);
    }
}
