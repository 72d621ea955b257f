use std::path::PathBuf;

use anomeval::data::{load_column, load_labels};
use anomeval::protocols::score_all;
use anomeval::PredictionSeries;
use serde::Serialize;

use super::{resolve_threshold, ThresholdRecord};
use crate::args::EvaluateArgs;
use crate::error::Result;
use crate::output::{print_protocol_table, rows_csv, ProtocolRow, Run, MANIFEST_FILE};

#[derive(Debug, Serialize)]
struct EvaluateReport {
    manifest: &'static str,
    note: Option<String>,
    points: usize,
    events: usize,
    threshold: Option<ThresholdRecord>,
    rows: Vec<ProtocolRow>,
}

pub fn run(out: Option<PathBuf>, args: EvaluateArgs) -> Result<()> {
    let mut run = Run::new(out, "evaluate", &args)?;
    run.input("labels", &args.labels)?;
    let labels = load_labels(&args.labels)?;

    let (preds, threshold) = match (&args.predictions, &args.scores) {
        (Some(path), _) => {
            run.input("predictions", path)?;
            (
                PredictionSeries::from_values(&load_column(path, "prediction")?)?,
                None,
            )
        }
        (None, Some(path)) => {
            run.input("scores", path)?;
            let scores = load_column(path, "score")?;
            let th = resolve_threshold(&scores, &labels, args.threshold_policy)?;
            (
                PredictionSeries::from_scores(&scores, th),
                Some(ThresholdRecord::new(args.threshold_policy, th)),
            )
        }
        (None, None) => unreachable!("clap requires one input"),
    };

    let reports = score_all(&labels, &preds, &args.protocols)?;
    let rows: Vec<ProtocolRow> = reports.iter().map(ProtocolRow::from).collect();
    if let Some(t) = &threshold {
        match t.value {
            Some(v) => println!("threshold ({}): {v}", t.policy),
            None => println!("threshold ({}): +inf, nothing flagged", t.policy),
        }
    }
    print_protocol_table(&rows);

    let report = EvaluateReport {
        manifest: MANIFEST_FILE,
        note: args.note.clone(),
        points: labels.len(),
        events: labels.events().len(),
        threshold,
        rows,
    };
    run.write_json("report.json", &report)?;
    run.write("report.csv", &rows_csv(&report.rows)?)?;
    run.finish()
}
