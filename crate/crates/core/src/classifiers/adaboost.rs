use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::tree::{grow, Tree, TreeConfig};
use super::{check_finite, check_train, single_class, FittedModel, ModelParams};
use crate::data::Dataset;
use crate::error::{Error, Result};

/// AdaBoost hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AdaBoostConfig {
    /// Maximum number of boosting rounds.
    pub n_rounds: usize,
}

impl Default for AdaBoostConfig {
    fn default() -> Self {
        Self { n_rounds: 50 }
    }
}

/// Weighted vote of decision stumps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdaBoostModel {
    /// Settings used.
    pub config: AdaBoostConfig,
    /// One stump per completed round.
    pub stumps: Vec<Tree>,
    /// Stump weights `ln((1 - err) / err)`.
    pub alphas: Vec<f64>,
    /// Weighted training error of each stump.
    pub errors: Vec<f64>,
}

impl AdaBoostModel {
    /// Share of the total stump weight voting for class 1.
    pub fn score(&self, x: &[f64]) -> f64 {
        let total: f64 = self.alphas.iter().sum();
        let yes: f64 = self.stumps.iter().zip(&self.alphas).filter(|(s, _)| s.predict(x) == 1).map(|(_, a)| a).sum();
        yes / total
    }
}

/// Two-class SAMME with depth-1 CART stumps.
///
/// Boosting stops after a stump with zero weighted error (kept with weight 1)
/// or a stump no better than chance (discarded, unless it is the first).
pub fn fit_adaboost(train: &Dataset, cfg: &AdaBoostConfig) -> Result<FittedModel> {
    check_train(train)?;
    if cfg.n_rounds == 0 {
        return Err(Error::Parameter("n_rounds must be positive".into()));
    }
    let (x, y) = (train.features(), train.labels());
    check_finite(x)?;
    single_class(train);
    let n = x.rows();
    let stump_cfg = TreeConfig { max_depth: Some(1), min_samples_split: 2, max_features: None };
    let mut w = vec![1.0 / n as f64; n];
    let mut model = AdaBoostModel { config: *cfg, stumps: Vec::new(), alphas: Vec::new(), errors: Vec::new() };
    for round in 0..cfg.n_rounds {
        let stump = grow(x, y, &w, (0..n).collect(), &stump_cfg, None);
        let miss: Vec<bool> = (0..n).map(|i| stump.predict(x.row(i)) != y[i]).collect();
        let err: f64 = w.iter().zip(&miss).filter(|(_, &m)| m).map(|(wi, _)| wi).sum::<f64>() / w.iter().sum::<f64>();
        if err <= 0.0 {
            model.stumps.push(stump);
            model.alphas.push(1.0);
            model.errors.push(0.0);
            break;
        }
        if err >= 0.5 {
            if round == 0 {
                log::warn!("first stump does not beat chance (weighted error {err}); keeping it alone");
                model.stumps.push(stump);
                model.alphas.push(1.0);
                model.errors.push(err);
            }
            break;
        }
        let alpha = ((1.0 - err) / err).ln();
        for (wi, &m) in w.iter_mut().zip(&miss) {
            if m {
                *wi *= alpha.exp();
            }
        }
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|wi| *wi /= total);
        model.stumps.push(stump);
        model.alphas.push(alpha);
        model.errors.push(err);
    }
    Ok(FittedModel::new(train, ModelParams::AdaBoost(model)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{FeatureSchema, LabelEncoding};
    use crate::linalg::Matrix;

    fn line(values: &[f64], labels: &[u8]) -> Dataset {
        let mut schema = FeatureSchema::ehr(LabelEncoding::SeverityLevel);
        schema.columns.truncate(1);
        Dataset::new(schema, Matrix::from_vec(values.len(), 1, values.to_vec()).unwrap(), labels.to_vec()).unwrap()
    }

    fn fitted(ds: &Dataset, rounds: usize) -> AdaBoostModel {
        match fit_adaboost(ds, &AdaBoostConfig { n_rounds: rounds }).unwrap().params {
            ModelParams::AdaBoost(m) => m,
            _ => unreachable!(),
        }
    }

    #[test]
    fn two_rounds_by_hand() {
        // round 1: best stump x <= 2.5 has leaves [1/2, 1/2] -> 1 and pure 1,
        // so only x = 2 is wrong: err 1/4, alpha ln 3, weights [1,3,1,1]/6.
        // round 2: x <= 2.5 again, left leaf now [3/4, 1/4] -> 0, so only
        // x = 1 is wrong: err 1/6, alpha ln 5.
        let m = fitted(&line(&[1.0, 2.0, 3.0, 4.0], &[1, 0, 1, 1]), 2);
        assert_eq!(m.alphas.len(), 2);
        assert!((m.errors[0] - 0.25).abs() < 1e-15);
        assert!((m.alphas[0] - 3f64.ln()).abs() < 1e-12);
        assert!((m.errors[1] - 1.0 / 6.0).abs() < 1e-15);
        assert!((m.alphas[1] - 5f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn perfect_first_stump_stops() {
        let m = fitted(&line(&[1.0, 2.0, 3.0, 4.0], &[0, 0, 1, 1]), 50);
        assert_eq!(m.stumps.len(), 1);
        assert_eq!(m.errors, vec![0.0]);
    }
}
