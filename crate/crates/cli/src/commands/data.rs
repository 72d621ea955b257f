use std::path::PathBuf;

use anomeval::data::{
    check_label_consistency, generate_synthetic, generate_training, labels_from_events,
    load_events, load_labels, DiffDirection, EventSpec, LabelDiff, SyntheticSpec,
};
use serde::Serialize;

use crate::args::{CheckLabelsArgs, GenerateArgs};
use crate::error::{CliError, Result};
use crate::output::{csv_bytes, rows_csv, Run, MANIFEST_FILE};

pub fn generate(out: Option<PathBuf>, args: GenerateArgs) -> Result<()> {
    let mut run = Run::new(out, "generate", &args)?;
    run.input("spec", &args.spec)?;
    let mut spec = SyntheticSpec::load(&args.spec)?;
    if let Some(seed) = args.seed {
        spec.seed = seed;
    }
    run.seed(spec.seed);
    let test = generate_synthetic(&spec)?;
    let test_csv = csv_bytes(|w| test.write_csv(w))?;
    if !run.has_out_dir() {
        if args.train_rows.is_some() {
            return Err(CliError::Usage("--train-rows needs --out".into()));
        }
        print!("{}", String::from_utf8_lossy(&test_csv));
        return Ok(());
    }

    let events: Vec<EventSpec> = test
        .labels()
        .map(|l| {
            l.events()
                .iter()
                .map(|s| EventSpec {
                    start: s.start,
                    end: s.end,
                })
                .collect()
        })
        .unwrap_or_default();
    run.write("test.csv", &test_csv)?;
    run.write("events.csv", &rows_csv(&events)?)?;
    if let Some(rows) = args.train_rows {
        let train = generate_training(&spec, rows)?;
        run.write("train.csv", &csv_bytes(|w| train.write_csv(w))?)?;
    }
    println!(
        "{} points, {} channels, {} events, contamination {:.6}",
        spec.total_points,
        spec.channels,
        events.len(),
        spec.contamination()
    );
    run.finish()
}

#[derive(Debug, Serialize)]
struct CheckReport {
    manifest: &'static str,
    points: usize,
    consistent: bool,
    integrated_events: usize,
    reconstructed_events: usize,
    diff: LabelDiff,
}

#[derive(Serialize)]
struct RunRow {
    start: usize,
    end: usize,
    length: usize,
    direction: DiffDirection,
}

pub fn check_labels(out: Option<PathBuf>, args: CheckLabelsArgs) -> Result<()> {
    let mut run = Run::new(out, "check-labels", &args)?;
    run.input("labels", &args.labels)?;
    run.input("events", &args.events)?;
    let integrated = load_labels(&args.labels)?;
    let events = load_events(&args.events, args.end_exclusive)?;
    let reconstructed = labels_from_events(&events, integrated.len())?;
    let diff = check_label_consistency(&integrated, &reconstructed)?;

    println!(
        "{} points: {} integrated events, {} reconstructed events",
        integrated.len(),
        integrated.events().len(),
        reconstructed.events().len()
    );
    if diff.is_empty() {
        println!("labelings agree");
    } else {
        println!(
            "{} points anomalous only in the label column, {} only in the event file, {} disagreeing runs",
            diff.integrated_only,
            diff.reconstructed_only,
            diff.runs.len()
        );
        for r in diff.runs.iter().take(20) {
            let side = match r.direction {
                DiffDirection::IntegratedOnly => "label column only",
                DiffDirection::ReconstructedOnly => "event file only",
            };
            println!("  {:>8}..={:<8} {side}", r.segment.start, r.segment.end);
        }
        if diff.runs.len() > 20 {
            println!("  ... {} more runs in report.csv", diff.runs.len() - 20);
        }
    }

    let rows: Vec<RunRow> = diff
        .runs
        .iter()
        .map(|r| RunRow {
            start: r.segment.start,
            end: r.segment.end,
            length: r.segment.len(),
            direction: r.direction,
        })
        .collect();
    let report = CheckReport {
        manifest: MANIFEST_FILE,
        points: integrated.len(),
        consistent: diff.is_empty(),
        integrated_events: integrated.events().len(),
        reconstructed_events: reconstructed.events().len(),
        diff,
    };
    run.write_json("report.json", &report)?;
    run.write("report.csv", &rows_csv(&rows)?)?;
    run.finish()
}
