//! Learning algorithms and evaluation measures for binary severity
//! classification of tabular blood-panel records.
//!
//! The crate is `no_std` and only needs `alloc`. File IO, report
//! emission and the command line live in the `ehrsev` companion crate.
//!
//! Modules:
//!
//! * [`data`] - feature schema, dataset container, summaries, splits.
//! * [`preprocess`] - scalers, Pearson correlation, correlation-driven
//!   feature elimination, PCA.
//! * [`metrics`] - confusion scores, ROC/AUC, silhouette, mixture
//!   log-likelihood and BIC, cluster-to-label alignment.
//! * [`clustering`] - k-means (+ elbow), agglomerative linkage, Gaussian
//!   mixtures by EM, spectral clustering.
//! * [`classifiers`] - decision tree, random forest, AdaBoost, Newton
//!   boosting, KNN, naive Bayes, logistic regression, GLM, SVC and the
//!   fast large-margin linear solver behind one [`classifiers::FittedModel`].
//! * [`neural_net`] - feed-forward network trained by mini-batch SGD.
#![no_std]
#![warn(missing_docs)]

extern crate alloc;

pub mod classifiers;
pub mod clustering;
pub mod data;
pub mod error;
pub mod linalg;
pub mod metrics;
pub mod neural_net;
pub mod preprocess;
mod rng;

pub use error::{Error, Result};
pub use linalg::Matrix;
