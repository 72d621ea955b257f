use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anomeval::study::DatasetShape;
use anomeval::Protocol;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

/// Scores time-series anomaly detectors under point-wise, point-adjust,
/// composite and event-wise protocols.
#[derive(Debug, Parser)]
#[command(name = "anomeval", version, about)]
pub struct Cli {
    /// Directory for report.json, report.csv, plot data and manifest.json
    #[arg(long, global = true, env = "ANOMEVAL_OUT_DIR", value_name = "DIR")]
    pub out: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Score predictions (or thresholded scores) against labels
    Evaluate(EvaluateArgs),
    /// Flag random points and score them under every protocol
    Attack(AttackArgs),
    /// Distribution of the adjusted F1 of the random attack
    Fig23(CdfArgs),
    /// F1 of fixed-recall, fixed-FAR detectors across contamination rates
    Fig4(StudyArgs),
    /// Worst-case adjusted scores and perfect-recall probability per alpha
    Fig5(WorstArgs),
    /// Fit and evaluate the PCA reconstruction-error baseline
    Baseline(BaselineArgs),
    /// Generate a labelled synthetic dataset
    Generate(GenerateArgs),
    /// Compare a label column with labels rebuilt from an event file
    CheckLabels(CheckLabelsArgs),
}

const ALL_PROTOCOLS: [&str; 4] = ["point-wise", "point-adjust", "composite", "event-wise"];

/// How scores become binary predictions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ThresholdPolicy {
    /// Threshold maximizing point-wise F1 on the labels.
    BestPwF1,
    /// Flag points with `score >= value`.
    Fixed(f64),
}

impl FromStr for ThresholdPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "best-pw-f1" {
            return Ok(ThresholdPolicy::BestPwF1);
        }
        s.strip_prefix("fixed:")
            .and_then(|v| v.parse::<f64>().ok())
            .filter(|v| !v.is_nan())
            .map(ThresholdPolicy::Fixed)
            .ok_or_else(|| format!("expected 'best-pw-f1' or 'fixed:<value>', got '{s}'"))
    }
}

impl fmt::Display for ThresholdPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ThresholdPolicy::BestPwF1 => f.write_str("best-pw-f1"),
            ThresholdPolicy::Fixed(v) => write!(f, "fixed:{v}"),
        }
    }
}

#[derive(Debug, Args, Serialize)]
pub struct EvaluateArgs {
    /// CSV with a `label` column of 0/1
    #[arg(long)]
    pub labels: PathBuf,

    /// CSV with a `prediction` column of 0/1
    #[arg(long, conflicts_with = "scores", required_unless_present = "scores")]
    pub predictions: Option<PathBuf>,

    /// CSV with a `score` column; thresholded per --threshold-policy
    #[arg(long)]
    pub scores: Option<PathBuf>,

    /// `best-pw-f1` or `fixed:<value>`
    #[arg(long, default_value = "best-pw-f1")]
    pub threshold_policy: ThresholdPolicy,

    /// Comma-separated protocols to report
    #[arg(long, value_delimiter = ',', default_values = ALL_PROTOCOLS)]
    pub protocols: Vec<Protocol>,

    /// Free-text dataset description copied into the report (e.g. a dataset version)
    #[arg(long)]
    pub note: Option<String>,
}

#[derive(Debug, Args, Serialize)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["labels", "spec", "total_points"]))]
pub struct AttackArgs {
    /// CSV with a `label` column to attack
    #[arg(long)]
    pub labels: Option<PathBuf>,

    /// Synthetic dataset spec (TOML); its labels are attacked
    #[arg(long)]
    pub spec: Option<PathBuf>,

    /// Length of a series with a single centred anomalous segment
    #[arg(long, requires = "anomalous_length")]
    pub total_points: Option<usize>,

    /// Length of that segment
    #[arg(long, requires = "total_points")]
    pub anomalous_length: Option<usize>,

    /// Number of points flagged per trial
    #[arg(long)]
    pub alpha: usize,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    #[arg(long, default_value_t = 1)]
    pub trials: u64,

    /// F1 level for the reported exceedance probabilities
    #[arg(long, default_value_t = 0.8)]
    pub level: f64,

    #[arg(long, value_delimiter = ',', default_values = ALL_PROTOCOLS)]
    pub protocols: Vec<Protocol>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelArg {
    /// Independent draws (binomial hit count)
    Bernoulli,
    /// Distinct draws (hypergeometric hit count)
    Exact,
}

#[derive(Debug, Args, Serialize)]
pub struct CdfArgs {
    #[arg(long, default_value_t = 5000)]
    pub total_points: usize,

    #[arg(long, default_value_t = 500)]
    pub anomalous_length: usize,

    #[arg(long, default_value_t = 50)]
    pub alpha: usize,

    #[arg(long, value_enum, default_value_t = ModelArg::Bernoulli)]
    pub model: ModelArg,

    /// Also estimate the distribution from this many simulated attacks
    #[arg(long, default_value_t = 0)]
    pub trials: u64,

    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

fn parse_shape(s: &str) -> Result<DatasetShape, String> {
    let (n, a) = s
        .split_once(':')
        .ok_or_else(|| format!("expected NORMAL:ANOMALOUS, got '{s}'"))?;
    let parse = |x: &str| x.trim().parse::<usize>().map_err(|e| format!("'{x}': {e}"));
    DatasetShape::new(parse(n)?, parse(a)?).map_err(|e| e.to_string())
}

#[derive(Debug, Args, Serialize)]
pub struct StudyArgs {
    #[arg(long, default_value_t = 0.99)]
    pub recall: f64,

    #[arg(long, default_value_t = 0.001)]
    pub far_min: f64,

    #[arg(long, default_value_t = 0.2)]
    pub far_max: f64,

    /// Number of log-spaced FAR values
    #[arg(long, default_value_t = 50)]
    pub points: usize,

    /// Comma-separated NORMAL:ANOMALOUS point counts
    #[arg(long, value_delimiter = ',', value_parser = parse_shape,
          default_values = ["10000:5000", "10000:1000", "10000:100"])]
    pub shapes: Vec<DatasetShape>,
}

#[derive(Debug, Args, Serialize)]
pub struct WorstArgs {
    #[arg(long, default_value_t = 50)]
    pub anomalous_length: usize,

    /// Contamination rate used for the perfect-recall probability
    #[arg(long, default_value_t = 0.1)]
    pub contamination: f64,

    /// Largest alpha; rows cover 1..=alpha-max
    #[arg(long, default_value_t = 100)]
    pub alpha_max: usize,
}

#[derive(Debug, Args, Serialize)]
#[command(group = clap::ArgGroup::new("model_source").required(true).args(["train", "load_model"]))]
pub struct BaselineArgs {
    /// Anomaly-free training frame (CSV)
    #[arg(long)]
    pub train: Option<PathBuf>,

    /// Test frame (CSV) with a final `label` column, or pair with --labels
    #[arg(long)]
    pub test: PathBuf,

    /// Labels for the test frame when it carries none
    #[arg(long)]
    pub labels: Option<PathBuf>,

    /// Use a saved model instead of fitting one
    #[arg(long)]
    pub load_model: Option<PathBuf>,

    /// Also save the fitted model here
    #[arg(long)]
    pub save_model: Option<PathBuf>,

    /// PCA config (TOML: variance_target, clip_quantiles, smooth_window)
    #[arg(long)]
    pub config: Option<PathBuf>,

    #[arg(long)]
    pub variance_target: Option<f64>,

    #[arg(long)]
    pub smooth_window: Option<usize>,

    #[arg(long, default_value = "best-pw-f1")]
    pub threshold_policy: ThresholdPolicy,

    #[arg(long, value_delimiter = ',', default_values = ALL_PROTOCOLS)]
    pub protocols: Vec<Protocol>,

    #[arg(long)]
    pub note: Option<String>,
}

#[derive(Debug, Args, Serialize)]
pub struct GenerateArgs {
    /// Synthetic dataset spec (TOML)
    #[arg(long)]
    pub spec: PathBuf,

    /// Override the spec's seed
    #[arg(long)]
    pub seed: Option<u64>,

    /// Also write an anomaly-free training frame of this many rows
    #[arg(long)]
    pub train_rows: Option<usize>,
}

#[derive(Debug, Args, Serialize)]
pub struct CheckLabelsArgs {
    /// CSV whose `label` column is the integrated labeling
    #[arg(long)]
    pub labels: PathBuf,

    /// CSV of `start,end` event bounds
    #[arg(long)]
    pub events: PathBuf,

    /// Treat `end` as one past the last anomalous index
    #[arg(long)]
    pub end_exclusive: bool,
}
