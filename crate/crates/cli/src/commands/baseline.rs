use std::path::PathBuf;

use anomeval::data::{load_frame, load_labels};
use anomeval::pca::{fit, PcaConfig, ScoredModel};
use anomeval::protocols::score_all;
use anomeval::PredictionSeries;
use serde::Serialize;

use super::{resolve_threshold, ThresholdRecord};
use crate::args::BaselineArgs;
use crate::error::{CliError, Result};
use crate::output::{
    print_protocol_table, rows_csv, write_atomic, ProtocolRow, Run, MANIFEST_FILE,
};

#[derive(Debug, Serialize)]
struct ModelSummary {
    channels: usize,
    n_components: usize,
    smooth_window: usize,
    /// Fraction of training variance kept by the components.
    explained_variance: f64,
}

#[derive(Debug, Serialize)]
struct BaselineReport {
    manifest: &'static str,
    note: Option<String>,
    config: Option<PcaConfig>,
    model: ModelSummary,
    points: usize,
    events: usize,
    threshold: ThresholdRecord,
    rows: Vec<ProtocolRow>,
}

#[derive(Serialize)]
struct ScoreRow {
    score: f64,
    label: u8,
}

fn resolve_config(args: &BaselineArgs) -> Result<PcaConfig> {
    let mut config = match &args.config {
        Some(path) => PcaConfig::load(path)?,
        None => PcaConfig::default(),
    };
    if let Some(v) = args.variance_target {
        config.variance_target = v;
    }
    if let Some(w) = args.smooth_window {
        config.smooth_window = w;
    }
    config.validate()?;
    Ok(config)
}

pub fn run(out: Option<PathBuf>, args: BaselineArgs) -> Result<()> {
    let mut run = Run::new(out, "baseline", &args)?;
    run.input("test", &args.test)?;
    let test = load_frame(&args.test)?;
    let labels = match (&args.labels, test.labels()) {
        (Some(path), _) => {
            run.input("labels", path)?;
            load_labels(path)?
        }
        (None, Some(l)) => l.clone(),
        (None, None) => {
            return Err(CliError::Usage(
                "test frame has no label column; pass --labels".into(),
            ))
        }
    };

    let (model, config) = match (&args.load_model, &args.train) {
        (Some(path), _) => {
            run.input("model", path)?;
            (ScoredModel::load(path)?, None)
        }
        (None, Some(path)) => {
            run.input("train", path)?;
            if let Some(c) = &args.config {
                run.input("config", c)?;
            }
            let config = resolve_config(&args)?;
            (fit(&load_frame(path)?, &config)?, Some(config))
        }
        (None, None) => unreachable!("clap requires a model source"),
    };

    let scores = model.score(&test)?;
    let threshold = resolve_threshold(&scores.scores, &labels, args.threshold_policy)?;
    let preds = PredictionSeries::from_scores(&scores.scores, threshold);
    let reports = score_all(&labels, &preds, &args.protocols)?;
    let rows: Vec<ProtocolRow> = reports.iter().map(ProtocolRow::from).collect();

    let total: f64 = model.eigenvalues.iter().sum();
    let kept: f64 = model.eigenvalues[..model.n_components].iter().sum();
    let summary = ModelSummary {
        channels: model.center.len(),
        n_components: model.n_components,
        smooth_window: model.smooth_window,
        explained_variance: if total > 0.0 { kept / total } else { 1.0 },
    };
    println!(
        "components {}/{} (explained variance {:.4}), smoothing window {}",
        summary.n_components, summary.channels, summary.explained_variance, summary.smooth_window
    );
    let record = ThresholdRecord::new(args.threshold_policy, threshold);
    match record.value {
        Some(v) => println!("threshold ({}): {v}", record.policy),
        None => println!("threshold ({}): +inf, nothing flagged", record.policy),
    }
    print_protocol_table(&rows);

    let model_json = model.to_json()?;
    if let Some(path) = &args.save_model {
        write_atomic(path, model_json.as_bytes())?;
    }
    let report = BaselineReport {
        manifest: MANIFEST_FILE,
        note: args.note.clone(),
        config,
        model: summary,
        points: labels.len(),
        events: labels.events().len(),
        threshold: record,
        rows,
    };
    run.write("model.json", model_json.as_bytes())?;
    let score_rows: Vec<ScoreRow> = scores
        .scores
        .iter()
        .zip(labels.values())
        .map(|(&score, &l)| ScoreRow {
            score,
            label: u8::from(l),
        })
        .collect();
    run.write("scores.csv", &rows_csv(&score_rows)?)?;
    run.write_json("report.json", &report)?;
    run.write("report.csv", &rows_csv(&report.rows)?)?;
    run.finish()
}
