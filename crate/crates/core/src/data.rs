//! Feature schema, dataset container, per-column summaries and splits.
//!
//! Record parsing lives here so the validation rules are shared by every
//! front end; reading bytes from disk is the companion crate's job.

use alloc::borrow::ToOwned;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)] // shadowed by inherent methods when std is linked
use num_traits::Float;
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rng;

/// Number of equal-width bins in column histograms.
pub const HISTOGRAM_BINS: usize = 20;

/// How a feature column is encoded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ColumnKind {
    /// Finite real number.
    Continuous {
        /// When set, values must be integers within `[min, max]`.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        integer_range: Option<(i64, i64)>,
    },
    /// Two-category nominal value encoded as 0 (first) / 1 (second).
    Binary {
        /// Category text for 0 and 1.
        categories: [String; 2],
    },
}

impl ColumnKind {
    /// Plain continuous column.
    pub fn continuous() -> Self {
        ColumnKind::Continuous { integer_range: None }
    }

    /// Whether the column is continuous.
    pub fn is_continuous(&self) -> bool {
        matches!(self, ColumnKind::Continuous { .. })
    }
}

/// One feature column of the schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnSpec {
    /// Header name.
    pub name: String,
    /// Encoding.
    #[serde(flatten)]
    pub kind: ColumnKind,
    /// Alternative header spellings accepted on load.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub aliases: Vec<String>,
}

impl ColumnSpec {
    /// Continuous column without aliases.
    pub fn continuous(name: &str) -> Self {
        Self { name: name.to_owned(), kind: ColumnKind::continuous(), aliases: Vec::new() }
    }

    fn matches(&self, header: &str) -> bool {
        self.name == header || self.aliases.iter().any(|a| a == header)
    }
}

/// Which of the two published label layouts a file uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelEncoding {
    /// `SOURCE` column with `out` (0) / `in` (1).
    Source,
    /// `SEVERITY LEVEL` column with `Mild` (0) / `Severe` (1).
    SeverityLevel,
}

impl LabelEncoding {
    /// Header name of the label column.
    pub fn column_name(self) -> &'static str {
        match self {
            LabelEncoding::Source => "SOURCE",
            LabelEncoding::SeverityLevel => "SEVERITY LEVEL",
        }
    }

    /// `(negative, positive)` label text.
    pub fn values(self) -> (&'static str, &'static str) {
        match self {
            LabelEncoding::Source => ("out", "in"),
            LabelEncoding::SeverityLevel => ("Mild", "Severe"),
        }
    }

    /// Picks the encoding whose label column appears in `header`.
    pub fn detect<S: AsRef<str>>(header: &[S]) -> Option<Self> {
        let has = |name: &str| header.iter().any(|h| h.as_ref().trim() == name);
        if has(LabelEncoding::Source.column_name()) {
            Some(LabelEncoding::Source)
        } else if has(LabelEncoding::SeverityLevel.column_name()) {
            Some(LabelEncoding::SeverityLevel)
        } else {
            None
        }
    }
}

/// Ordered feature columns plus the binary label column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureSchema {
    /// Feature columns in matrix order.
    pub columns: Vec<ColumnSpec>,
    /// Label column header.
    pub label_column: String,
    /// Label text encoded as 1.
    pub positive_label: String,
    /// Label text encoded as 0.
    pub negative_label: String,
}

/// Blood-panel feature names in file order.
pub const EHR_FEATURES: [&str; 10] = [
    "HAEMATOCRIT",
    "HAEMOGLOBINS",
    "ERYTHROCYTE",
    "LEUCOCYTE",
    "THROMBOCYTE",
    "MCH",
    "MCHC",
    "MCV",
    "AGE",
    "SEX",
];

/// Columns dropped by the correlation-driven reduction used for reproduction runs.
pub const CORRELATED_FEATURES: [&str; 5] = ["HAEMATOCRIT", "HAEMOGLOBINS", "ERYTHROCYTE", "MCH", "MCHC"];

impl FeatureSchema {
    /// Schema of the blood-panel severity dataset.
    pub fn ehr(encoding: LabelEncoding) -> Self {
        let mut columns: Vec<ColumnSpec> = EHR_FEATURES[..8].iter().map(|n| ColumnSpec::continuous(n)).collect();
        columns[1].aliases.push("HAEMOGLOBSevereS".into());
        columns.push(ColumnSpec {
            name: "AGE".into(),
            kind: ColumnKind::Continuous { integer_range: Some((1, 120)) },
            aliases: Vec::new(),
        });
        columns.push(ColumnSpec {
            name: "SEX".into(),
            kind: ColumnKind::Binary { categories: ["F".into(), "M".into()] },
            aliases: Vec::new(),
        });
        let (neg, pos) = encoding.values();
        Self {
            columns,
            label_column: encoding.column_name().into(),
            positive_label: pos.into(),
            negative_label: neg.into(),
        }
    }

    /// Feature names in matrix order.
    pub fn feature_names(&self) -> Vec<String> {
        self.columns.iter().map(|c| c.name.clone()).collect()
    }

    /// Position of a feature column by name.
    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c.name == name)
    }

    /// Checks the structural invariants: unique names, label distinct
    /// from the features, two distinct label values.
    pub fn validate(&self) -> Result<()> {
        if self.columns.is_empty() {
            return Err(Error::Schema("schema has no feature columns".into()));
        }
        for (i, c) in self.columns.iter().enumerate() {
            if self.columns[..i].iter().any(|o| o.name == c.name) {
                return Err(Error::Schema(format!("duplicate column {}", c.name)));
            }
            if c.name == self.label_column {
                return Err(Error::Schema(format!("label column {} listed as a feature", c.name)));
            }
            if let ColumnKind::Binary { categories } = &c.kind {
                if categories[0] == categories[1] {
                    return Err(Error::Schema(format!("binary column {} needs two categories", c.name)));
                }
            }
        }
        if self.positive_label == self.negative_label {
            return Err(Error::Schema("label needs two distinct values".into()));
        }
        Ok(())
    }
}

/// Immutable feature matrix with encoded labels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dataset {
    schema: FeatureSchema,
    features: Matrix,
    labels: Vec<u8>,
    row_ids: Vec<usize>,
    provenance: Vec<String>,
}

impl Dataset {
    /// Assembles a dataset, checking shapes and label range.
    pub fn new(schema: FeatureSchema, features: Matrix, labels: Vec<u8>) -> Result<Self> {
        let row_ids = (0..labels.len()).collect();
        Self::with_row_ids(schema, features, labels, row_ids)
    }

    /// Like [`Dataset::new`] with explicit ordinal row ids.
    pub fn with_row_ids(schema: FeatureSchema, features: Matrix, labels: Vec<u8>, row_ids: Vec<usize>) -> Result<Self> {
        schema.validate()?;
        if features.rows() != labels.len() || row_ids.len() != labels.len() {
            return Err(Error::Schema(format!(
                "{} feature rows, {} labels, {} row ids",
                features.rows(),
                labels.len(),
                row_ids.len()
            )));
        }
        if features.cols() != schema.columns.len() {
            return Err(Error::Schema(format!(
                "{} feature columns but schema lists {}",
                features.cols(),
                schema.columns.len()
            )));
        }
        if let Some(row) = labels.iter().position(|&l| l > 1) {
            return Err(Error::Label { row, value: labels[row].to_string() });
        }
        Ok(Self { schema, features, labels, row_ids, provenance: Vec::new() })
    }

    /// Schema describing the feature columns.
    pub fn schema(&self) -> &FeatureSchema {
        &self.schema
    }

    /// Feature matrix (`n_rows x n_features`).
    pub fn features(&self) -> &Matrix {
        &self.features
    }

    /// Encoded labels (0 = mild / out-care, 1 = severe / in-care).
    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// Ordinal ids of the rows in the originally loaded file.
    pub fn row_ids(&self) -> &[usize] {
        &self.row_ids
    }

    /// Transforms applied since load, oldest first.
    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    /// Number of rows.
    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    /// Number of feature columns.
    pub fn n_features(&self) -> usize {
        self.features.cols()
    }

    /// Feature names in column order.
    pub fn feature_names(&self) -> Vec<String> {
        self.schema.feature_names()
    }

    /// `[negatives, positives]`.
    pub fn class_counts(&self) -> [usize; 2] {
        let pos = self.labels.iter().filter(|&&l| l == 1).count();
        [self.labels.len() - pos, pos]
    }

    /// Rows at the given positions, keeping their row ids.
    pub fn subset(&self, positions: &[usize]) -> Dataset {
        Dataset {
            schema: self.schema.clone(),
            features: self.features.select_rows(positions),
            labels: positions.iter().map(|&i| self.labels[i]).collect(),
            row_ids: positions.iter().map(|&i| self.row_ids[i]).collect(),
            provenance: self.provenance.clone(),
        }
    }

    /// Replaces the feature block, keeping labels and row ids, and records `step`.
    pub fn with_features(&self, columns: Vec<ColumnSpec>, features: Matrix, step: impl Into<String>) -> Result<Dataset> {
        let schema = FeatureSchema { columns, ..self.schema.clone() };
        let mut ds = Dataset::with_row_ids(schema, features, self.labels.clone(), self.row_ids.clone())?;
        ds.provenance = self.provenance.clone();
        ds.provenance.push(step.into());
        Ok(ds)
    }

    /// Records a provenance step.
    pub fn push_provenance(&mut self, step: impl Into<String>) {
        self.provenance.push(step.into());
    }

    /// Text form of a cell, inverse of the load-time parsing.
    pub fn format_cell(&self, row: usize, col: usize) -> String {
        let v = self.features[(row, col)];
        match &self.schema.columns[col].kind {
            ColumnKind::Binary { categories } if v == 0.0 || v == 1.0 => categories[v as usize].clone(),
            _ => format!("{v}"),
        }
    }

    /// Text form of a label.
    pub fn format_label(&self, row: usize) -> &str {
        if self.labels[row] == 1 {
            &self.schema.positive_label
        } else {
            &self.schema.negative_label
        }
    }
}

/// Incremental record parser that validates cells against a schema.
#[derive(Debug)]
pub struct DatasetBuilder {
    schema: FeatureSchema,
    positions: Vec<usize>,
    label_position: usize,
    width: usize,
    strict: bool,
    values: Vec<f64>,
    labels: Vec<u8>,
    imputed: Vec<(usize, usize)>,
}

impl DatasetBuilder {
    /// Resolves the header against the schema. Column order in the file
    /// is free; every schema column and the label must be present.
    pub fn new<S: AsRef<str>>(schema: FeatureSchema, header: &[S], strict: bool) -> Result<Self> {
        schema.validate()?;
        if header.is_empty() {
            return Err(Error::Schema("missing header row".into()));
        }
        let header: Vec<&str> = header.iter().map(|h| h.as_ref().trim()).collect();
        let mut positions = Vec::with_capacity(schema.columns.len());
        for col in &schema.columns {
            match header.iter().position(|h| col.matches(h)) {
                Some(p) => positions.push(p),
                None => return Err(Error::Schema(format!("missing column {}", col.name))),
            }
        }
        let label_position = header
            .iter()
            .position(|h| *h == schema.label_column)
            .ok_or_else(|| Error::Schema(format!("missing label column {}", schema.label_column)))?;
        Ok(Self {
            schema,
            positions,
            label_position,
            width: header.len(),
            strict,
            values: Vec::new(),
            labels: Vec::new(),
            imputed: Vec::new(),
        })
    }

    /// Parses one data record.
    pub fn push_record<S: AsRef<str>>(&mut self, record: &[S]) -> Result<()> {
        let row = self.labels.len();
        if record.len() != self.width {
            return Err(Error::Row {
                row,
                column: String::new(),
                message: format!("expected {} fields, found {}", self.width, record.len()),
            });
        }
        let label_text = record[self.label_position].as_ref().trim();
        let label = if label_text == self.schema.positive_label {
            1
        } else if label_text == self.schema.negative_label {
            0
        } else {
            return Err(Error::Label { row, value: label_text.to_owned() });
        };

        let mut parsed = Vec::with_capacity(self.positions.len());
        for (j, (col, &p)) in self.schema.columns.iter().zip(&self.positions).enumerate() {
            let cell = record[p].as_ref().trim();
            match parse_cell(col, cell) {
                Ok(v) => parsed.push(v),
                Err(message) if self.strict => {
                    return Err(Error::Row { row, column: col.name.clone(), message });
                }
                Err(_) => {
                    self.imputed.push((row, j));
                    parsed.push(f64::NAN);
                }
            }
        }
        self.values.extend(parsed);
        self.labels.push(label);
        Ok(())
    }

    /// Cells replaced by column means (lenient mode), as `(row, column)`.
    pub fn imputed_cells(&self) -> &[(usize, usize)] {
        &self.imputed
    }

    /// Finishes the dataset, mean-imputing rejected cells in lenient mode.
    pub fn finish(mut self) -> Result<Dataset> {
        if self.labels.is_empty() {
            return Err(Error::Schema("no data rows".into()));
        }
        let d = self.schema.columns.len();
        let n = self.labels.len();
        if !self.imputed.is_empty() {
            for j in 0..d {
                let (sum, count) = (0..n)
                    .map(|i| self.values[i * d + j])
                    .filter(|v| !v.is_nan())
                    .fold((0.0, 0usize), |(s, c), v| (s + v, c + 1));
                if count == 0 {
                    return Err(Error::Schema(format!("column {} has no parseable values", self.schema.columns[j].name)));
                }
                let mut fill = sum / count as f64;
                if !self.schema.columns[j].kind.is_continuous() {
                    fill = if fill >= 0.5 { 1.0 } else { 0.0 };
                }
                for i in 0..n {
                    if self.values[i * d + j].is_nan() {
                        self.values[i * d + j] = fill;
                    }
                }
            }
            log::warn!("mean-imputed {} cells", self.imputed.len());
        }
        let features = Matrix::from_vec(n, d, self.values)?;
        let mut ds = Dataset::new(self.schema, features, self.labels)?;
        if !self.imputed.is_empty() {
            ds.push_provenance(format!("mean-imputed {} cells", self.imputed.len()));
        }
        Ok(ds)
    }
}

fn parse_cell(col: &ColumnSpec, cell: &str) -> core::result::Result<f64, String> {
    match &col.kind {
        ColumnKind::Binary { categories } => {
            if cell == categories[0] {
                Ok(0.0)
            } else if cell == categories[1] {
                Ok(1.0)
            } else {
                Err(format!("expected {} or {}, found {cell:?}", categories[0], categories[1]))
            }
        }
        ColumnKind::Continuous { integer_range } => {
            let v: f64 = cell.parse().map_err(|_| format!("not a number: {cell:?}"))?;
            if !v.is_finite() {
                return Err(format!("non-finite value {cell:?}"));
            }
            if let Some((lo, hi)) = integer_range {
                if v.fract() != 0.0 || v < *lo as f64 || v > *hi as f64 {
                    return Err(format!("expected an integer in [{lo}, {hi}], found {cell}"));
                }
            }
            Ok(v)
        }
    }
}

/// Equal-width histogram over `[min, max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    /// Left edge of the first bin.
    pub min: f64,
    /// Right edge of the last bin.
    pub max: f64,
    /// Counts per bin; a zero-width range puts all mass in bin 0.
    pub counts: Vec<usize>,
}

impl Histogram {
    fn build(values: &[f64], min: f64, max: f64, bins: usize) -> Self {
        let mut counts = vec![0usize; bins];
        let width = (max - min) / bins as f64;
        for &v in values {
            let b = if width > 0.0 { (((v - min) / width) as usize).min(bins - 1) } else { 0 };
            counts[b] += 1;
        }
        Self { min, max, counts }
    }
}

/// Descriptive statistics of one feature column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ColumnSummary {
    /// Column name.
    pub name: String,
    /// Number of distinct values.
    pub unique_count: usize,
    /// Minimum.
    pub min: f64,
    /// Arithmetic mean.
    pub mean: f64,
    /// Median (mean of the two middle values for even counts).
    pub median: f64,
    /// Maximum.
    pub max: f64,
    /// 20-bin histogram.
    pub histogram: Histogram,
}

/// Label distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelSummary {
    /// Label column name.
    pub name: String,
    /// Number of distinct encoded labels present.
    pub unique_count: usize,
    /// `[count of 0, count of 1]`.
    pub class_counts: [usize; 2],
}

/// Per-column summaries plus the label distribution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryReport {
    /// Number of rows.
    pub n_rows: usize,
    /// One entry per feature column.
    pub columns: Vec<ColumnSummary>,
    /// Label distribution.
    pub label: LabelSummary,
}

impl SummaryReport {
    /// Summary of a column by name.
    pub fn column(&self, name: &str) -> Option<&ColumnSummary> {
        self.columns.iter().find(|c| c.name == name)
    }
}

/// Unique counts, min/mean/median/max and histograms for every column.
pub fn summarize(ds: &Dataset) -> Result<SummaryReport> {
    if ds.n_rows() == 0 {
        return Err(Error::Schema("cannot summarize an empty dataset".into()));
    }
    let columns = ds
        .schema()
        .columns
        .iter()
        .enumerate()
        .map(|(j, spec)| {
            let mut values = ds.features().column(j);
            values.sort_by(f64::total_cmp);
            let n = values.len();
            let mut distinct = values.clone();
            distinct.dedup();
            let median = if n % 2 == 1 { values[n / 2] } else { 0.5 * (values[n / 2 - 1] + values[n / 2]) };
            let (min, max) = (values[0], values[n - 1]);
            ColumnSummary {
                name: spec.name.clone(),
                unique_count: distinct.len(),
                min,
                mean: values.iter().sum::<f64>() / n as f64,
                median,
                max,
                histogram: Histogram::build(&values, min, max, HISTOGRAM_BINS),
            }
        })
        .collect();
    let class_counts = ds.class_counts();
    Ok(SummaryReport {
        n_rows: ds.n_rows(),
        columns,
        label: LabelSummary {
            name: ds.schema().label_column.clone(),
            unique_count: class_counts.iter().filter(|&&c| c > 0).count(),
            class_counts,
        },
    })
}

/// Holdout split parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    /// Fraction of rows in the test side, in `(0, 1)`.
    pub test_fraction: f64,
    /// Keep per-class proportions.
    pub stratified: bool,
    /// Shuffle seed.
    pub seed: u64,
}

impl SplitSpec {
    /// Stratified 80/20 split with the given seed.
    pub fn new(seed: u64) -> Self {
        Self { test_fraction: 0.2, stratified: true, seed }
    }
}

/// Size of the test side: `ceil(n * fraction)`, robust to representation error.
fn test_size(n: usize, fraction: f64) -> usize {
    let raw = n as f64 * fraction;
    let rounded = raw.round();
    if (raw - rounded).abs() < 1e-9 {
        rounded as usize
    } else {
        raw.ceil() as usize
    }
}

/// Positions of the test rows for a holdout split (sorted ascending).
pub fn holdout_positions(labels: &[u8], spec: &SplitSpec) -> Result<Vec<usize>> {
    let n = labels.len();
    if !(spec.test_fraction > 0.0 && spec.test_fraction < 1.0) {
        return Err(Error::Split(format!("test_fraction {} outside (0, 1)", spec.test_fraction)));
    }
    let total = test_size(n, spec.test_fraction);
    if total == 0 || total >= n {
        return Err(Error::Split(format!("{n} rows cannot give a test side of {total}")));
    }
    let mut rng = rng::seeded(spec.seed);
    let mut test = if spec.stratified {
        let mut by_class: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
        for (i, &l) in labels.iter().enumerate() {
            by_class[l as usize].push(i);
        }
        if by_class.iter().any(|c| c.is_empty()) {
            return Err(Error::Split("stratification needs both classes".into()));
        }
        // largest-remainder allocation of `total` across classes
        let exact: Vec<f64> = by_class.iter().map(|c| c.len() as f64 * total as f64 / n as f64).collect();
        let mut alloc_: Vec<usize> = exact.iter().map(|e| e.floor() as usize).collect();
        let mut left = total - alloc_.iter().sum::<usize>();
        let mut order = [0usize, 1];
        order.sort_by(|&a, &b| (exact[b] - exact[b].floor()).total_cmp(&(exact[a] - exact[a].floor())).then(a.cmp(&b)));
        for &c in order.iter().cycle() {
            if left == 0 {
                break;
            }
            alloc_[c] += 1;
            left -= 1;
        }
        let mut test = Vec::with_capacity(total);
        for (c, members) in by_class.iter_mut().enumerate() {
            if alloc_[c] == 0 || alloc_[c] >= members.len() {
                return Err(Error::Split(format!(
                    "class {c} with {} rows cannot put {} rows in test and keep one in train",
                    members.len(),
                    alloc_[c]
                )));
            }
            members.shuffle(&mut rng);
            test.extend_from_slice(&members[..alloc_[c]]);
        }
        test
    } else {
        let mut all: Vec<usize> = (0..n).collect();
        all.shuffle(&mut rng);
        all.truncate(total);
        all
    };
    test.sort_unstable();
    Ok(test)
}

/// Splits into `(train, test)`. Deterministic for a fixed seed.
pub fn stratified_split(ds: &Dataset, spec: &SplitSpec) -> Result<(Dataset, Dataset)> {
    let test = holdout_positions(ds.labels(), spec)?;
    let mut in_test = vec![false; ds.n_rows()];
    test.iter().for_each(|&i| in_test[i] = true);
    let train: Vec<usize> = (0..ds.n_rows()).filter(|&i| !in_test[i]).collect();
    let mut train_ds = ds.subset(&train);
    let mut test_ds = ds.subset(&test);
    let note = format!(
        "holdout split test_fraction={} stratified={} seed={}",
        spec.test_fraction, spec.stratified, spec.seed
    );
    train_ds.push_provenance(format!("{note} (train)"));
    test_ds.push_provenance(format!("{note} (test)"));
    Ok((train_ds, test_ds))
}

/// One cross-validation fold as row positions.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Fold {
    /// Training positions (sorted).
    pub train: Vec<usize>,
    /// Validation positions (sorted).
    pub validation: Vec<usize>,
}

/// Shuffled k-fold partition of `n_rows` positions. The first `n % k`
/// folds hold one extra row.
pub fn kfold_splits(n_rows: usize, k: usize, seed: u64) -> Result<Vec<Fold>> {
    if k < 2 {
        return Err(Error::Split(format!("k = {k}; need at least 2 folds")));
    }
    if k > n_rows {
        return Err(Error::Split(format!("k = {k} exceeds {n_rows} rows")));
    }
    let mut order: Vec<usize> = (0..n_rows).collect();
    order.shuffle(&mut rng::seeded(seed));
    let (base, extra) = (n_rows / k, n_rows % k);
    let mut folds = Vec::with_capacity(k);
    let mut start = 0;
    for f in 0..k {
        let size = base + usize::from(f < extra);
        let mut validation = order[start..start + size].to_vec();
        validation.sort_unstable();
        let mut train: Vec<usize> = order[..start].iter().chain(&order[start + size..]).copied().collect();
        train.sort_unstable();
        folds.push(Fold { train, validation });
        start += size;
    }
    Ok(folds)
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEADER_B: [&str; 11] = [
        "HAEMATOCRIT",
        "HAEMOGLOBINS",
        "ERYTHROCYTE",
        "LEUCOCYTE",
        "THROMBOCYTE",
        "MCH",
        "MCHC",
        "MCV",
        "AGE",
        "SEX",
        "SEVERITY LEVEL",
    ];

    fn toy(n0: usize, n1: usize) -> Dataset {
        let schema = FeatureSchema {
            columns: vec![ColumnSpec::continuous("x")],
            label_column: "y".into(),
            positive_label: "1".into(),
            negative_label: "0".into(),
        };
        let n = n0 + n1;
        let x = Matrix::from_vec(n, 1, (0..n).map(|i| i as f64).collect()).unwrap();
        let labels = (0..n).map(|i| u8::from(i >= n0)).collect();
        Dataset::new(schema, x, labels).unwrap()
    }

    #[test]
    fn first_published_row_parses() {
        let schema = FeatureSchema::ehr(LabelEncoding::SeverityLevel);
        let mut b = DatasetBuilder::new(schema, &HEADER_B, true).unwrap();
        b.push_record(&["35.1", "11.8", "4.65", "6.3", "310", "25.4", "33.6", "75.5", "1", "F", "Mild"]).unwrap();
        let ds = b.finish().unwrap();
        assert_eq!(ds.features().row(0), &[35.1, 11.8, 4.65, 6.3, 310.0, 25.4, 33.6, 75.5, 1.0, 0.0]);
        assert_eq!(ds.labels(), &[0]);
    }

    #[test]
    fn header_typo_alias_and_source_variant() {
        let mut header = HEADER_B;
        header[1] = "HAEMOGLOBSevereS";
        header[10] = "SOURCE";
        assert_eq!(LabelEncoding::detect(&header), Some(LabelEncoding::Source));
        let mut b = DatasetBuilder::new(FeatureSchema::ehr(LabelEncoding::Source), &header, true).unwrap();
        b.push_record(&["54", "16.6", "7.61", "10", "88", "21.8", "30.7", "71", "1", "M", "in"]).unwrap();
        let ds = b.finish().unwrap();
        assert_eq!(ds.labels(), &[1]);
        assert_eq!(ds.features()[(0, 9)], 1.0);
    }

    #[test]
    fn missing_column_is_schema_error() {
        let header = &HEADER_B[1..];
        let err = DatasetBuilder::new(FeatureSchema::ehr(LabelEncoding::SeverityLevel), header, true).unwrap_err();
        assert!(matches!(err, Error::Schema(ref m) if m.contains("HAEMATOCRIT")));
    }

    #[test]
    fn bad_cell_and_bad_label() {
        let schema = FeatureSchema::ehr(LabelEncoding::SeverityLevel);
        let mut b = DatasetBuilder::new(schema.clone(), &HEADER_B, true).unwrap();
        b.push_record(&["35.1", "11.8", "4.65", "6.3", "310", "25.4", "33.6", "75.5", "1", "F", "Mild"]).unwrap();
        let err = b.push_record(&["x", "11.8", "4.65", "6.3", "310", "25.4", "33.6", "75.5", "1", "F", "Mild"]).unwrap_err();
        assert!(matches!(err, Error::Row { row: 1, ref column, .. } if column == "HAEMATOCRIT"));

        let mut b = DatasetBuilder::new(schema.clone(), &HEADER_B, true).unwrap();
        let err = b.push_record(&["35.1", "11.8", "4.65", "6.3", "310", "25.4", "33.6", "75.5", "1", "F", "Moderate"]).unwrap_err();
        assert!(matches!(err, Error::Label { row: 0, .. }));

        let mut b = DatasetBuilder::new(schema, &HEADER_B, true).unwrap();
        let err = b.push_record(&["35.1", "11.8", "4.65", "6.3", "310", "25.4", "33.6", "75.5", "0", "F", "Mild"]).unwrap_err();
        assert!(matches!(err, Error::Row { ref column, .. } if column == "AGE"));
    }

    #[test]
    fn lenient_mode_imputes_column_mean() {
        let schema = FeatureSchema::ehr(LabelEncoding::SeverityLevel);
        let mut b = DatasetBuilder::new(schema, &HEADER_B, false).unwrap();
        b.push_record(&["30", "11.8", "4.65", "6.3", "310", "25.4", "33.6", "75.5", "1", "F", "Mild"]).unwrap();
        b.push_record(&["", "11.8", "4.65", "6.3", "310", "25.4", "33.6", "75.5", "1", "F", "Mild"]).unwrap();
        b.push_record(&["40", "11.8", "4.65", "6.3", "310", "25.4", "33.6", "75.5", "1", "F", "Severe"]).unwrap();
        assert_eq!(b.imputed_cells(), &[(1, 0)]);
        let ds = b.finish().unwrap();
        assert_eq!(ds.features()[(1, 0)], 35.0);
    }

    #[test]
    fn empty_input_is_schema_error() {
        let empty: [&str; 0] = [];
        assert!(matches!(
            DatasetBuilder::new(FeatureSchema::ehr(LabelEncoding::Source), &empty, true),
            Err(Error::Schema(_))
        ));
        let b = DatasetBuilder::new(FeatureSchema::ehr(LabelEncoding::SeverityLevel), &HEADER_B, true).unwrap();
        assert!(matches!(b.finish(), Err(Error::Schema(_))));
    }

    #[test]
    fn single_row_summary() {
        let ds = toy(1, 0);
        let s = summarize(&ds).unwrap();
        assert_eq!(s.columns[0].unique_count, 1);
        assert_eq!(s.columns[0].histogram.counts[0], 1);
        assert_eq!(s.columns[0].histogram.counts.iter().sum::<usize>(), 1);
        assert_eq!(s.label.unique_count, 1);
    }

    #[test]
    fn summary_statistics() {
        let ds = toy(2, 2);
        let s = summarize(&ds).unwrap();
        let c = &s.columns[0];
        assert_eq!((c.min, c.mean, c.median, c.max), (0.0, 1.5, 1.5, 3.0));
        assert_eq!(c.histogram.counts.len(), HISTOGRAM_BINS);
        assert_eq!(c.histogram.counts[HISTOGRAM_BINS - 1], 1);
        assert_eq!(s.label.class_counts, [2, 2]);
    }

    #[test]
    fn split_sizes_match_published_holdout() {
        // 4412 rows with the published class balance
        let ds = toy(2862, 1550);
        let (train, test) = stratified_split(&ds, &SplitSpec::new(7)).unwrap();
        assert_eq!(test.n_rows(), 883);
        assert_eq!(train.n_rows() + test.n_rows(), 4412);
        let c = test.class_counts();
        assert!((c[1] as f64 - 883.0 * 1550.0 / 4412.0).abs() <= 1.0);
    }

    #[test]
    fn ten_rows_one_per_class() {
        // every stratified 20% partition of 5/5 puts exactly one of each class in test
        let ds = toy(5, 5);
        for seed in 0..20 {
            let (_, test) = stratified_split(&ds, &SplitSpec::new(seed)).unwrap();
            assert_eq!(test.class_counts(), [1, 1]);
        }
    }

    #[test]
    fn split_is_deterministic() {
        let ds = toy(30, 20);
        let a = stratified_split(&ds, &SplitSpec::new(3)).unwrap();
        let b = stratified_split(&ds, &SplitSpec::new(3)).unwrap();
        assert_eq!(a.1.row_ids(), b.1.row_ids());
        assert_eq!(a.0.row_ids(), b.0.row_ids());
    }

    #[test]
    fn impossible_stratification() {
        let ds = toy(5, 0);
        assert!(matches!(stratified_split(&ds, &SplitSpec::new(1)), Err(Error::Split(_))));
        let ds = toy(9, 1);
        assert!(matches!(stratified_split(&ds, &SplitSpec::new(1)), Err(Error::Split(_))));
    }

    #[test]
    fn kfold_examples() {
        let folds = kfold_splits(10, 5, 1).unwrap();
        assert!(folds.iter().all(|f| f.validation.len() == 2));
        let mut all: Vec<usize> = folds.iter().flat_map(|f| f.validation.clone()).collect();
        all.sort_unstable();
        assert_eq!(all, (0..10).collect::<Vec<_>>());

        let sizes: Vec<usize> = kfold_splits(7, 3, 9).unwrap().iter().map(|f| f.validation.len()).collect();
        assert_eq!(sizes, vec![3, 2, 2]);

        assert_eq!(kfold_splits(20, 4, 5).unwrap(), kfold_splits(20, 4, 5).unwrap());
        assert!(matches!(kfold_splits(3, 4, 0), Err(Error::Split(_))));
        assert!(matches!(kfold_splits(3, 1, 0), Err(Error::Split(_))));
    }
}
