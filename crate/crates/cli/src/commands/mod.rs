mod attack;
mod baseline;
mod data;
mod evaluate;
mod figures;

use anomeval::pca::sweep_scores;
use anomeval::{LabelSeries, Protocol};
use serde::Serialize;

use crate::args::{Cli, Command, ThresholdPolicy};
use crate::error::Result;

pub fn dispatch(cli: Cli) -> Result<()> {
    let out = cli.out;
    match cli.command {
        Command::Evaluate(args) => evaluate::run(out, args),
        Command::Attack(args) => attack::run(out, args),
        Command::Fig23(args) => figures::cdf(out, args),
        Command::Fig4(args) => figures::study(out, args),
        Command::Fig5(args) => figures::worst(out, args),
        Command::Baseline(args) => baseline::run(out, args),
        Command::Generate(args) => data::generate(out, args),
        Command::CheckLabels(args) => data::check_labels(out, args),
    }
}

/// Turns a policy into a concrete threshold for `scores`.
fn resolve_threshold(scores: &[f64], labels: &LabelSeries, policy: ThresholdPolicy) -> Result<f64> {
    Ok(match policy {
        ThresholdPolicy::BestPwF1 => sweep_scores(scores, labels, Protocol::PointWise)?.threshold,
        ThresholdPolicy::Fixed(v) => v,
    })
}

/// A threshold as written to JSON; `+inf` (nothing flagged) has no JSON number.
#[derive(Debug, Serialize)]
struct ThresholdRecord {
    policy: String,
    value: Option<f64>,
    flags_nothing: bool,
}

impl ThresholdRecord {
    fn new(policy: ThresholdPolicy, value: f64) -> Self {
        ThresholdRecord {
            policy: policy.to_string(),
            value: value.is_finite().then_some(value),
            flags_nothing: value == f64::INFINITY,
        }
    }
}
