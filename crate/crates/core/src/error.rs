//! Error type shared by every module of the crate.

use alloc::string::String;
use alloc::vec::Vec;

/// Convenience alias.
pub type Result<T> = core::result::Result<T, Error>;

/// Failure modes of the algorithms in this crate.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// Input header or schema does not match the expected layout.
    #[error("schema error: {0}")]
    Schema(String),
    /// A data cell could not be parsed.
    #[error("row {row}: column {column}: {message}")]
    Row {
        /// Zero-based data row index (header excluded).
        row: usize,
        /// Column name.
        column: String,
        /// What went wrong.
        message: String,
    },
    /// A label cell holds a value outside the accepted encodings.
    #[error("row {row}: unknown label value {value:?}")]
    Label {
        /// Zero-based data row index.
        row: usize,
        /// The offending value.
        value: String,
    },
    /// A split (holdout or k-fold) cannot be produced.
    #[error("split error: {0}")]
    Split(String),
    /// A hyperparameter is out of its valid range.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// Metric inputs are inconsistent (length mismatch, single class, ...).
    #[error("metric error: {0}")]
    Metric(String),
    /// A numerical routine failed (non positive-definite matrix, divergence).
    #[error("numerical error: {0}")]
    Numerical(String),
    /// Feature elimination would leave no features or names an unknown column.
    #[error("reduction error: {0}")]
    Reduction(String),
    /// Prediction input does not carry the columns a model was trained on.
    #[error("feature mismatch: missing {missing:?}, extra {extra:?}")]
    FeatureMismatch {
        /// Columns the model expects but the input lacks.
        missing: Vec<String>,
        /// Columns present in the input but unknown to the model.
        extra: Vec<String>,
    },
    /// Training produced a non-finite loss.
    #[error("training diverged at epoch {epoch}; last finite epoch {last_finite:?}")]
    Diverged {
        /// Epoch (zero-based) at which the loss became non-finite.
        epoch: usize,
        /// Last epoch whose loss was finite, if any.
        last_finite: Option<usize>,
    },
}
