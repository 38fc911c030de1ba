use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ehrsev::config::ExperimentConfig;
use ehrsev::error::{CliError, Result};
use ehrsev::io::{load_dataset, summarize_file, write_summary};
use ehrsev::model_io::{train_saved_model, SavedModel};
use ehrsev::report::{compare_to_reference, Comparison, ReportTable, Tolerances};
use ehrsev::{experiment, reproduce};
use ehrsev_core::metrics::{confusion, scores};

/// Severity classification experiments on blood-panel records.
#[derive(Debug, Parser)]
#[command(name = "ehrsev", version)]
struct Cli {
    /// Experiment config (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Reject unparseable cells instead of imputing them.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Per-column statistics and class counts of a CSV.
    Summarize {
        /// Input CSV; defaults to the config dataset.
        #[arg(long)]
        data: Option<PathBuf>,
    },
    /// Runs the configured experiment.
    Run,
    /// Regenerates one published table and compares it with the shipped reference.
    Reproduce {
        /// Table number, 3 to 14.
        #[arg(long, value_parser = clap::value_parser!(u8).range(3..=14))]
        table: u8,
        /// Input CSV; defaults to the config dataset, then $EHR_DATASET, then data/ehr.csv.
        #[arg(long)]
        data: Option<PathBuf>,
    },
    /// Compares a produced table with a reference table.
    Compare {
        /// Produced table (CSV).
        #[arg(long)]
        actual: PathBuf,
        /// Reference table (CSV, may carry `# tolerance:` lines).
        #[arg(long)]
        reference: PathBuf,
        /// Extra `metric=value` or `row.metric=value` tolerances.
        #[arg(long = "tolerance")]
        tolerances: Vec<String>,
    },
    /// Trains one configured model and writes it to a file.
    SaveModel {
        /// Model label; defaults to the first configured model.
        #[arg(long)]
        model: Option<String>,
        /// Destination file; defaults to `<out>/<label>.model.json`.
        #[arg(long)]
        path: Option<PathBuf>,
    },
    /// Scores a CSV with a saved model.
    LoadModel {
        /// Saved model file.
        #[arg(long)]
        path: PathBuf,
        /// Input CSV.
        #[arg(long)]
        data: PathBuf,
    },
}

enum Outcome {
    Pass,
    ComparisonFailed,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match execute(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::ComparisonFailed) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn load_config(cli: &Cli) -> Result<Option<ExperimentConfig>> {
    let Some(path) = &cli.config else { return Ok(None) };
    let mut cfg = ExperimentConfig::load(path)?;
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &cli.out {
        cfg.output_dir = out.clone();
    }
    if cli.strict {
        cfg.dataset.strict = true;
    }
    cfg.validate()?;
    Ok(Some(cfg))
}

fn require_config(cli: &Cli) -> Result<ExperimentConfig> {
    load_config(cli)?.ok_or_else(|| CliError::Config("this command needs --config".into()))
}

fn out_dir(cli: &Cli, cfg: Option<&ExperimentConfig>) -> PathBuf {
    cli.out.clone().or_else(|| cfg.map(|c| c.output_dir.clone())).unwrap_or_else(|| PathBuf::from("out"))
}

fn report_comparisons(comparisons: &[(String, Comparison)]) -> Outcome {
    for (name, cmp) in comparisons {
        println!("{name}: {}", cmp.summary());
        for f in cmp.failures() {
            let actual = f.actual.map_or_else(|| "missing".to_owned(), |v| format!("{v:.4}"));
            println!("  FAIL {}.{}: {actual} vs {} (tolerance {})", f.row, f.metric, f.expected, f.tolerance);
        }
    }
    if comparisons.iter().all(|(_, c)| c.all_passed()) {
        Outcome::Pass
    } else {
        Outcome::ComparisonFailed
    }
}

fn execute(cli: Cli) -> Result<Outcome> {
    match &cli.command {
        Command::Summarize { data } => {
            let cfg = load_config(&cli)?;
            let path = data
                .clone()
                .or_else(|| cfg.as_ref().map(|c| c.dataset.path.clone()))
                .ok_or_else(|| CliError::Config("summarize needs --data or --config".into()))?;
            let strict = cli.strict || cfg.as_ref().is_some_and(|c| c.dataset.strict);
            let report = summarize_file(&path, strict)?;
            let out = out_dir(&cli, cfg.as_ref());
            for p in write_summary(&report, &out)? {
                println!("wrote {}", p.display());
            }
            println!("{} rows, class counts {:?}", report.n_rows, report.label.class_counts);
            Ok(Outcome::Pass)
        }
        Command::Run => {
            let cfg = require_config(&cli)?;
            let outcome = experiment::run_experiment(&cfg, &cfg.output_dir)?;
            println!("wrote {} files to {}", outcome.manifest.files.len(), cfg.output_dir.display());
            Ok(report_comparisons(&outcome.comparisons))
        }
        Command::Reproduce { table, data } => {
            let cfg = load_config(&cli)?;
            let dataset = data
                .clone()
                .or_else(|| cfg.as_ref().map(|c| c.dataset.path.clone()))
                .or_else(|| std::env::var_os("EHR_DATASET").map(PathBuf::from))
                .unwrap_or_else(|| PathBuf::from("data/ehr.csv"));
            let seed = cli.seed.or(cfg.as_ref().map(|c| c.seed)).unwrap_or(42);
            let out = out_dir(&cli, cfg.as_ref());
            let outcome = reproduce::reproduce(*table, &dataset, seed, cli.strict, &out)?;
            println!("table {table}: outputs in {}", out.join(format!("table_{table:02}")).display());
            Ok(report_comparisons(&outcome.comparisons))
        }
        Command::Compare { actual, reference, tolerances } => {
            let produced = ReportTable::read_csv(actual)?;
            let text = fs::read_to_string(reference).map_err(|e| CliError::Io { path: reference.clone(), source: e })?;
            let (reference, directives) = ReportTable::parse_csv(&text)?;
            let mut tol = Tolerances::from_directives(&directives)?;
            for t in tolerances {
                tol.set(t).map_err(CliError::Compare)?;
            }
            if tol.per_metric.is_empty() && tol.per_cell.is_empty() {
                return Err(CliError::Compare("no tolerances: add `# tolerance:` lines or --tolerance".into()));
            }
            let cmp = compare_to_reference(&produced, &reference, &tol)?;
            if let Some(out) = &cli.out {
                fs::create_dir_all(out).map_err(|e| CliError::Io { path: out.clone(), source: e })?;
                let path = out.join("comparison.csv");
                fs::write(&path, cmp.to_csv()).map_err(|e| CliError::Io { path, source: e })?;
            }
            Ok(report_comparisons(&[("comparison".into(), cmp)]))
        }
        Command::SaveModel { model, path } => {
            let cfg = require_config(&cli)?;
            let saved = train_saved_model(&cfg, model.as_deref())?;
            let path = path.clone().unwrap_or_else(|| out_dir(&cli, Some(&cfg)).join(format!("{}.model.json", saved.label)));
            saved.save(&path)?;
            println!("saved {} ({}) to {}", saved.label, saved.model.algorithm(), path.display());
            Ok(Outcome::Pass)
        }
        Command::LoadModel { path, data } => {
            let saved = SavedModel::load(path)?;
            let ds = load_dataset(data, cli.strict)?;
            let (pred, score) = saved.predict(&ds)?;
            let out = out_dir(&cli, None);
            write_predictions(&out, &ds, &pred, &score)?;
            let cm = confusion(&pred, ds.labels())?;
            let s = scores(&cm)?;
            let metrics = serde_json::json!({
                "model": saved.label,
                "algorithm": saved.model.algorithm(),
                "rows": ds.n_rows(),
                "confusion": cm,
                "accuracy": s.accuracy,
                "precision": s.precision,
                "recall": s.recall,
                "f1": s.f1,
            });
            let mpath = out.join("metrics.json");
            fs::write(&mpath, serde_json::to_string_pretty(&metrics).expect("json value") + "\n")
                .map_err(|e| CliError::Io { path: mpath.clone(), source: e })?;
            println!("accuracy {:.4} on {} rows; predictions in {}", s.accuracy, ds.n_rows(), out.display());
            Ok(Outcome::Pass)
        }
    }
}

fn write_predictions(out: &Path, ds: &ehrsev_core::data::Dataset, pred: &[u8], score: &[f64]) -> Result<()> {
    fs::create_dir_all(out).map_err(|e| CliError::Io { path: out.to_path_buf(), source: e })?;
    let path = out.join("predictions.csv");
    let mut text = String::from("row,score,predicted,actual\n");
    for i in 0..ds.n_rows() {
        text.push_str(&format!("{},{},{},{}\n", ds.row_ids()[i], score[i], pred[i], ds.labels()[i]));
    }
    fs::write(&path, text).map_err(|e| CliError::Io { path, source: e })
}
