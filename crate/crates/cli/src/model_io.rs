//! Saved-model file format.

use std::fs;
use std::path::Path;

use ehrsev_core::classifiers::FittedModel;
use ehrsev_core::data::Dataset;
use serde::{Deserialize, Serialize};

use crate::config::ModelConfig;
use crate::error::{io_err, json_err, CliError, Result};
use crate::experiment::Preprocessing;

/// Value of the `format` field.
pub const MODEL_FORMAT: &str = "ehrsev-model";
/// Current format version.
pub const MODEL_VERSION: u32 = 1;

/// A fitted model plus everything needed to score raw rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SavedModel {
    /// Always [`MODEL_FORMAT`].
    pub format: String,
    /// Format version.
    pub version: u32,
    /// Model label from the config.
    pub label: String,
    /// Hyperparameters the model was fit with.
    pub hyperparameters: ModelConfig,
    /// Scaling and column removal to replay before scoring.
    pub preprocessing: Preprocessing,
    /// Learned parameters.
    pub model: FittedModel,
}

impl SavedModel {
    /// Wraps a fitted model.
    pub fn new(label: &str, hyperparameters: ModelConfig, preprocessing: Preprocessing, model: FittedModel) -> Self {
        Self { format: MODEL_FORMAT.into(), version: MODEL_VERSION, label: label.into(), hyperparameters, preprocessing, model }
    }

    /// Writes pretty JSON.
    pub fn save(&self, path: &Path) -> Result<()> {
        let text = serde_json::to_string_pretty(self).map_err(json_err("model"))? + "\n";
        if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
            fs::create_dir_all(parent).map_err(io_err(parent))?;
        }
        fs::write(path, text).map_err(io_err(path))
    }

    /// Reads and checks the format tag and version.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        let raw: serde_json::Value = serde_json::from_str(&text).map_err(json_err(path.display().to_string()))?;
        let format = raw.get("format").and_then(|v| v.as_str());
        if format != Some(MODEL_FORMAT) {
            return Err(CliError::Model(format!("{}: format {format:?}, expected {MODEL_FORMAT:?}", path.display())));
        }
        let version = raw.get("version").and_then(serde_json::Value::as_u64);
        if version != Some(u64::from(MODEL_VERSION)) {
            return Err(CliError::Model(format!("{}: version {version:?} is not supported", path.display())));
        }
        serde_json::from_value(raw).map_err(json_err(path.display().to_string()))
    }

    /// Replays preprocessing and returns `(labels, scores)`.
    pub fn predict(&self, raw: &Dataset) -> Result<(Vec<u8>, Vec<f64>)> {
        let ds = self.preprocessing.apply(raw)?;
        let scores = self.model.predict_score(&ds)?;
        let rule = self.model.params.decision_rule();
        Ok((scores.iter().map(|&s| rule.label(s)).collect(), scores))
    }
}

/// Fits the model labelled `label` (or the first model) the way `run` does:
/// training split, scaler and column removal fit on it, grid search, refit.
pub fn train_saved_model(cfg: &crate::config::ExperimentConfig, label: Option<&str>) -> Result<SavedModel> {
    use ehrsev_core::data::{stratified_split, SplitSpec};

    use crate::experiment::{cross_validate, fit_model};

    cfg.validate()?;
    let spec = match label {
        Some(l) => cfg.models.iter().find(|m| m.label == l),
        None => cfg.models.first(),
    }
    .ok_or_else(|| CliError::Config(format!("no model {:?} in the config", label.unwrap_or("<any>"))))?;
    let data = crate::io::load_dataset(&cfg.dataset.path, cfg.dataset.strict)?;
    let split = SplitSpec { test_fraction: cfg.split.test_fraction, stratified: cfg.split.stratified, seed: cfg.seed };
    let (train, _) = stratified_split(&data, &split)?;
    let prep = Preprocessing::fit(cfg, &train, cfg.reduction.supervised)?;
    let train = prep.apply(&train)?;
    let candidates = spec.candidates(cfg.seed)?;
    let mut best = (0, f64::NEG_INFINITY);
    if candidates.len() > 1 {
        for (i, c) in candidates.iter().enumerate() {
            let acc = cross_validate(c, &train, cfg.tuning.folds, cfg.seed)?;
            if acc > best.1 {
                best = (i, acc);
            }
        }
    }
    let hyper = candidates[best.0].clone();
    let model = fit_model(&hyper, &train)?;
    Ok(SavedModel::new(&spec.label, hyper, prep, model))
}
