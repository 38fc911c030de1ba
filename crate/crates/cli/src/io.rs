//! CSV loading and writing, summary emission.

use std::fs;
use std::path::{Path, PathBuf};

use ehrsev_core::data::{summarize, Dataset, DatasetBuilder, FeatureSchema, LabelEncoding, SummaryReport};

use crate::error::{io_err, json_err, CliError, Result};

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> CliError + '_ {
    move |source| CliError::Csv { path: path.to_path_buf(), source }
}

/// Loads a blood-panel CSV. The label encoding (SOURCE in/out or
/// SEVERITY LEVEL Mild/Severe) is detected from the header.
pub fn load_dataset(path: &Path, strict: bool) -> Result<Dataset> {
    let mut reader = csv::ReaderBuilder::new().has_headers(false).flexible(true).from_path(path).map_err(csv_err(path))?;
    let mut records = reader.records();
    let header: Vec<String> = match records.next() {
        Some(r) => r.map_err(csv_err(path))?.iter().map(|s| s.trim_start_matches('\u{feff}').to_owned()).collect(),
        None => return Err(ehrsev_core::Error::Schema("empty file".into()).into()),
    };
    let encoding = LabelEncoding::detect(&header).ok_or_else(|| {
        ehrsev_core::Error::Schema(format!(
            "no label column: expected {:?} or {:?}",
            LabelEncoding::Source.column_name(),
            LabelEncoding::SeverityLevel.column_name()
        ))
    })?;
    let mut builder = DatasetBuilder::new(FeatureSchema::ehr(encoding), &header, strict)?;
    for record in records {
        let record = record.map_err(csv_err(path))?;
        if record.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        builder.push_record(&record.iter().collect::<Vec<_>>())?;
    }
    let mut ds = builder.finish()?;
    ds.push_provenance(format!("loaded {}", path.display()));
    Ok(ds)
}

/// Writes a dataset with its original column names and label text.
pub fn write_dataset(ds: &Dataset, path: &Path) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    let mut header = ds.feature_names();
    header.push(ds.schema().label_column.clone());
    w.write_record(&header).map_err(csv_err(path))?;
    for i in 0..ds.n_rows() {
        let mut row: Vec<String> = (0..ds.n_features()).map(|j| ds.format_cell(i, j)).collect();
        row.push(ds.format_label(i).to_owned());
        w.write_record(&row).map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Writes `summary.json` and `summary.csv` (one row per column) into `dir`.
pub fn write_summary(report: &SummaryReport, dir: &Path) -> Result<Vec<PathBuf>> {
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let json_path = dir.join("summary.json");
    let json = serde_json::to_string_pretty(report).map_err(json_err("summary"))?;
    fs::write(&json_path, json + "\n").map_err(io_err(&json_path))?;

    let csv_path = dir.join("summary.csv");
    let mut w = csv::Writer::from_path(&csv_path).map_err(csv_err(&csv_path))?;
    w.write_record(["column", "unique_count", "min", "mean", "median", "max", "histogram"]).map_err(csv_err(&csv_path))?;
    for c in &report.columns {
        let hist: Vec<String> = c.histogram.counts.iter().map(usize::to_string).collect();
        w.write_record([
            c.name.clone(),
            c.unique_count.to_string(),
            c.min.to_string(),
            c.mean.to_string(),
            c.median.to_string(),
            c.max.to_string(),
            hist.join(" "),
        ])
        .map_err(csv_err(&csv_path))?;
    }
    let l = &report.label;
    w.write_record([
        l.name.clone(),
        l.unique_count.to_string(),
        String::new(),
        String::new(),
        String::new(),
        String::new(),
        format!("{} {}", l.class_counts[0], l.class_counts[1]),
    ])
    .map_err(csv_err(&csv_path))?;
    w.flush().map_err(io_err(&csv_path))?;
    Ok(vec![json_path, csv_path])
}

/// Loads and summarizes in one step.
pub fn summarize_file(path: &Path, strict: bool) -> Result<SummaryReport> {
    Ok(summarize(&load_dataset(path, strict)?)?)
}
