//! Metric tables, their CSV/JSON forms, and comparison against reference tables.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{io_err, json_err, CliError, Result};

/// Metrics that are not probabilities and may fall outside `[0, 1]`.
pub const UNBOUNDED_METRICS: [&str; 5] = ["log_likelihood", "bic", "inertia", "correct", "total"];

/// Where a table came from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    /// Experiment seed.
    pub seed: u64,
    /// SHA-256 of the canonical experiment config.
    pub config_sha256: String,
    /// Wall-clock time of the run; kept out of the CSV form.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<String>,
}

/// One labelled row; `None` marks a metric that does not apply.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    /// Algorithm or run label.
    pub label: String,
    /// One value per table header.
    pub values: Vec<Option<f64>>,
}

/// Named table of metric values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportTable {
    /// Table name.
    pub name: String,
    /// Metric column names.
    pub headers: Vec<String>,
    /// Rows in emission order.
    pub rows: Vec<ReportRow>,
    /// Seed and config hash of the producing run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub provenance: Option<Provenance>,
}

impl ReportTable {
    /// Empty table with the given metric columns.
    pub fn new(name: &str, headers: &[&str]) -> Self {
        Self { name: name.into(), headers: headers.iter().map(|h| (*h).to_owned()).collect(), rows: Vec::new(), provenance: None }
    }

    /// Appends a row; the value count must match the headers.
    pub fn push(&mut self, label: &str, values: Vec<Option<f64>>) {
        assert_eq!(values.len(), self.headers.len(), "row {label} has the wrong width");
        self.rows.push(ReportRow { label: label.into(), values });
    }

    /// Row by label.
    pub fn row(&self, label: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.label == label)
    }

    /// Cell by row label and metric name.
    pub fn get(&self, label: &str, metric: &str) -> Option<f64> {
        let j = self.headers.iter().position(|h| h == metric)?;
        self.row(label)?.values[j]
    }

    /// Checks widths, unique labels and the `[0, 1]` range of bounded metrics.
    pub fn validate(&self) -> Result<()> {
        for (i, r) in self.rows.iter().enumerate() {
            if r.values.len() != self.headers.len() {
                return Err(CliError::Compare(format!("{}: row {} has {} values for {} headers", self.name, r.label, r.values.len(), self.headers.len())));
            }
            if self.rows[..i].iter().any(|o| o.label == r.label) {
                return Err(CliError::Compare(format!("{}: duplicate row {}", self.name, r.label)));
            }
            for (h, v) in self.headers.iter().zip(&r.values) {
                if let Some(v) = v {
                    if !UNBOUNDED_METRICS.contains(&h.as_str()) && !(0.0..=1.0).contains(v) {
                        return Err(CliError::Compare(format!("{}: {}.{h} = {v} outside [0, 1]", self.name, r.label)));
                    }
                }
            }
        }
        Ok(())
    }

    /// CSV text: comment lines with name and provenance, then a header row
    /// and one line per row. Empty cells are metrics that do not apply.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# table: {}", self.name);
        if let Some(p) = &self.provenance {
            let _ = writeln!(out, "# seed: {}", p.seed);
            let _ = writeln!(out, "# config_sha256: {}", p.config_sha256);
        }
        let mut header = vec!["algorithm".to_owned()];
        header.extend(self.headers.iter().cloned());
        out.push_str(&header.join(","));
        out.push('\n');
        for r in &self.rows {
            let mut cells = vec![quote(&r.label)];
            cells.extend(r.values.iter().map(|v| v.map_or_else(String::new, |v| format!("{v}"))));
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    /// Pretty JSON including the timestamp.
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map(|s| s + "\n").map_err(json_err(format!("table {}", self.name)))
    }

    /// Parses the CSV form; `# key: value` comment lines are returned as directives.
    pub fn parse_csv(text: &str) -> Result<(Self, Vec<(String, String)>)> {
        let mut directives = Vec::new();
        let mut body = String::new();
        for line in text.lines() {
            let t = line.trim();
            if let Some(c) = t.strip_prefix('#') {
                if let Some((k, v)) = c.split_once(':') {
                    directives.push((k.trim().to_owned(), v.trim().to_owned()));
                }
            } else if !t.is_empty() {
                body.push_str(line);
                body.push('\n');
            }
        }
        let bad = |m: String| CliError::Compare(m);
        let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(body.as_bytes());
        let header = reader.headers().map_err(|e| bad(format!("header: {e}")))?.clone();
        if header.get(0) != Some("algorithm") {
            return Err(bad("first column must be `algorithm`".into()));
        }
        let name = directives.iter().find(|(k, _)| k == "table").map_or_else(String::new, |(_, v)| v.clone());
        let mut table = ReportTable { name, headers: header.iter().skip(1).map(str::to_owned).collect(), rows: Vec::new(), provenance: None };
        for rec in reader.records() {
            let rec = rec.map_err(|e| bad(format!("row: {e}")))?;
            let label = rec.get(0).unwrap_or_default().to_owned();
            let values = rec
                .iter()
                .skip(1)
                .map(|c| {
                    let c = c.trim();
                    if c.is_empty() || c.eq_ignore_ascii_case("n/a") {
                        Ok(None)
                    } else {
                        c.parse::<f64>().map(Some).map_err(|_| bad(format!("row {label}: not a number {c:?}")))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            if values.len() != table.headers.len() {
                return Err(bad(format!("row {label}: {} values for {} headers", values.len(), table.headers.len())));
            }
            table.rows.push(ReportRow { label, values });
        }
        let find = |k: &str| directives.iter().find(|(d, _)| d == k).map(|(_, v)| v.clone());
        if let (Some(seed), Some(hash)) = (find("seed"), find("config_sha256")) {
            let seed = seed.parse().map_err(|_| bad(format!("bad seed {seed:?}")))?;
            table.provenance = Some(Provenance { seed, config_sha256: hash, timestamp: None });
        }
        Ok((table, directives))
    }

    /// Writes the CSV form.
    pub fn write_csv(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv()).map_err(io_err(path))
    }

    /// Reads the CSV form.
    pub fn read_csv(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(io_err(path))?;
        Ok(Self::parse_csv(&text)?.0)
    }
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}

/// Absolute tolerances per metric, with optional per-cell overrides.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    /// Metric name to tolerance.
    pub per_metric: BTreeMap<String, f64>,
    /// `row.metric` to tolerance; wins over `per_metric`.
    pub per_cell: BTreeMap<String, f64>,
}

impl Tolerances {
    /// Accuracy, precision and F1 within 0.05, recall within 0.08.
    pub fn supervised() -> Self {
        let mut t = Self::default();
        for (m, v) in [("accuracy", 0.05), ("precision", 0.05), ("f1", 0.05), ("recall", 0.08)] {
            t.per_metric.insert(m.into(), v);
        }
        t
    }

    /// Every clustering quality metric within 0.10.
    pub fn clustering() -> Self {
        let mut t = Self::default();
        for m in ["accuracy", "precision", "recall", "f1", "silhouette"] {
            t.per_metric.insert(m.into(), 0.10);
        }
        t
    }

    /// The same tolerance for every metric.
    pub fn uniform(headers: &[String], tol: f64) -> Self {
        Self { per_metric: headers.iter().map(|h| (h.clone(), tol)).collect(), per_cell: BTreeMap::new() }
    }

    /// Reads `tolerance: metric=value` and `tolerance: row.metric=value` directives.
    pub fn from_directives(directives: &[(String, String)]) -> Result<Self> {
        let mut t = Self::default();
        for (k, v) in directives.iter().filter(|(k, _)| k == "tolerance") {
            t.set(v).map_err(|e| CliError::Compare(format!("{k}: {e}")))?;
        }
        Ok(t)
    }

    /// Applies one `key=value` assignment.
    pub fn set(&mut self, assignment: &str) -> std::result::Result<(), String> {
        let (key, value) = assignment.split_once('=').ok_or_else(|| format!("expected key=value, got {assignment:?}"))?;
        let value: f64 = value.trim().parse().map_err(|_| format!("bad tolerance {value:?}"))?;
        if !(value >= 0.0) {
            return Err(format!("tolerance {value} must be nonnegative"));
        }
        let key = key.trim().to_owned();
        if key.contains('.') {
            self.per_cell.insert(key, value);
        } else {
            self.per_metric.insert(key, value);
        }
        Ok(())
    }

    /// Entries of `other` replace ours.
    pub fn merged(mut self, other: &Tolerances) -> Self {
        self.per_metric.extend(other.per_metric.iter().map(|(k, v)| (k.clone(), *v)));
        self.per_cell.extend(other.per_cell.iter().map(|(k, v)| (k.clone(), *v)));
        self
    }

    /// Tolerance of one cell, if the metric is compared at all.
    pub fn for_cell(&self, row: &str, metric: &str) -> Option<f64> {
        self.per_cell.get(&format!("{row}.{metric}")).or_else(|| self.per_metric.get(metric)).copied()
    }
}

/// Outcome for one reference cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellCheck {
    /// Row label.
    pub row: String,
    /// Metric name.
    pub metric: String,
    /// Produced value (`None` if the run left it empty).
    pub actual: Option<f64>,
    /// Reference value.
    pub expected: f64,
    /// Allowed absolute difference.
    pub tolerance: f64,
    /// `|actual - expected| <= tolerance`.
    pub pass: bool,
}

/// Per-cell results of a comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    /// Compared cells in reference order.
    pub cells: Vec<CellCheck>,
    /// Reference cells without a tolerance (reported, not judged).
    pub skipped: Vec<String>,
}

impl Comparison {
    /// Number of passing cells.
    pub fn passed(&self) -> usize {
        self.cells.iter().filter(|c| c.pass).count()
    }

    /// Failing cells.
    pub fn failures(&self) -> Vec<&CellCheck> {
        self.cells.iter().filter(|c| !c.pass).collect()
    }

    /// True when no compared cell failed.
    pub fn all_passed(&self) -> bool {
        self.cells.iter().all(|c| c.pass)
    }

    /// One-line summary.
    pub fn summary(&self) -> String {
        format!("{}/{} cells within tolerance, {} not compared", self.passed(), self.cells.len(), self.skipped.len())
    }

    /// CSV with one line per compared cell.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("algorithm,metric,actual,expected,tolerance,pass\n");
        for c in &self.cells {
            let actual = c.actual.map_or_else(String::new, |v| format!("{v}"));
            let _ = writeln!(out, "{},{},{actual},{},{},{}", quote(&c.row), c.metric, c.expected, c.tolerance, c.pass);
        }
        out
    }
}

/// Checks every reference cell against the produced table.
///
/// Every reference row and metric must exist in `actual`; extra rows or
/// metrics in `actual` are ignored. Cells without a tolerance are skipped.
pub fn compare_to_reference(actual: &ReportTable, reference: &ReportTable, tol: &Tolerances) -> Result<Comparison> {
    let missing_cols: Vec<&String> = reference.headers.iter().filter(|h| !actual.headers.contains(h)).collect();
    if !missing_cols.is_empty() {
        return Err(CliError::Compare(format!("metrics {missing_cols:?} missing from table {}", actual.name)));
    }
    let missing_rows: Vec<&str> =
        reference.rows.iter().filter(|r| actual.row(&r.label).is_none()).map(|r| r.label.as_str()).collect();
    if !missing_rows.is_empty() {
        return Err(CliError::Compare(format!("rows {missing_rows:?} missing from table {}", actual.name)));
    }
    let mut out = Comparison { cells: Vec::new(), skipped: Vec::new() };
    for r in &reference.rows {
        for (metric, expected) in reference.headers.iter().zip(&r.values) {
            let Some(expected) = *expected else { continue };
            let Some(tolerance) = tol.for_cell(&r.label, metric) else {
                out.skipped.push(format!("{}.{metric}", r.label));
                continue;
            };
            let actual_v = actual.get(&r.label, metric);
            // the epsilon absorbs decimal rounding of transcribed values
            let pass = actual_v.is_some_and(|a| (a - expected).abs() <= tolerance + 1e-12);
            out.cells.push(CellCheck { row: r.label.clone(), metric: metric.clone(), actual: actual_v, expected, tolerance, pass });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table() -> ReportTable {
        let mut t = ReportTable::new("t", &["accuracy", "recall", "bic"]);
        t.push("a", vec![Some(0.5), Some(0.25), Some(-1234.5)]);
        t.push("b,c", vec![Some(1.0), None, None]);
        t.provenance = Some(Provenance { seed: 7, config_sha256: "ab".into(), timestamp: Some("now".into()) });
        t
    }

    #[test]
    fn csv_round_trip() {
        let t = table();
        let text = t.to_csv();
        assert!(!text.contains("now"));
        let (back, directives) = ReportTable::parse_csv(&text).unwrap();
        assert_eq!(back.rows, t.rows);
        assert_eq!(back.name, "t");
        assert_eq!(back.provenance.unwrap().seed, 7);
        assert!(directives.iter().any(|(k, v)| k == "config_sha256" && v == "ab"));
        t.validate().unwrap();
    }

    #[test]
    fn self_comparison_passes_at_zero_tolerance() {
        let t = table();
        let c = compare_to_reference(&t, &t, &Tolerances::uniform(&t.headers, 0.0)).unwrap();
        assert!(c.all_passed());
        assert_eq!(c.cells.len(), 4);
    }

    #[test]
    fn one_perturbed_cell_is_named() {
        let t = table();
        let mut other = t.clone();
        other.rows[0].values[1] = Some(0.4);
        let c = compare_to_reference(&other, &t, &Tolerances::supervised()).unwrap();
        let f = c.failures();
        assert_eq!(f.len(), 1);
        assert_eq!((f[0].row.as_str(), f[0].metric.as_str()), ("a", "recall"));
        assert_eq!(c.skipped, vec!["a.bic".to_string()]);
    }

    #[test]
    fn schema_mismatch_is_an_error() {
        let t = table();
        let narrow = ReportTable::new("n", &["accuracy"]);
        assert!(compare_to_reference(&narrow, &t, &Tolerances::supervised()).is_err());
    }

    #[test]
    fn tolerance_directives() {
        let d = vec![("tolerance".to_string(), "accuracy=0.05".to_string()), ("tolerance".to_string(), "glm.precision=0.07".to_string())];
        let t = Tolerances::from_directives(&d).unwrap();
        assert_eq!(t.for_cell("x", "accuracy"), Some(0.05));
        assert_eq!(t.for_cell("glm", "precision"), Some(0.07));
        assert_eq!(t.for_cell("svc", "precision"), None);
        assert!(Tolerances::default().set("recall=-1").is_err());
    }

    #[test]
    fn out_of_range_metric_is_rejected() {
        let mut t = ReportTable::new("t", &["accuracy"]);
        t.push("a", vec![Some(1.5)]);
        assert!(t.validate().is_err());
    }
}
