use std::path::PathBuf;

use anomeval::adversary::{
    attack_reports, f1pa_distribution, prob_perfect_recall, worst_case_f1pa,
    worst_case_precision_pa, AttackSetup, ProbabilityModel,
};
use anomeval::data::{generate_synthetic, load_labels, SyntheticSpec};
use anomeval::{LabelSeries, Protocol, ProtocolReport};
use serde::Serialize;

use crate::args::AttackArgs;
use crate::error::{CliError, Result};
use crate::output::{rows_csv, Run, MANIFEST_FILE};

#[derive(Debug, Clone, Serialize)]
struct ProtocolSummary {
    protocol: Protocol,
    deprecated_protocol: bool,
    mean_precision: f64,
    mean_recall: f64,
    mean_f1: f64,
    f1_min: f64,
    f1_p05: f64,
    f1_median: f64,
    f1_p95: f64,
    f1_max: f64,
    /// Fraction of trials with F1 at or above the requested level.
    prob_f1_at_least_level: f64,
}

/// Closed-form predictions, available when the labels hold a single event.
#[derive(Debug, Serialize)]
struct Analytic {
    contamination: f64,
    prob_perfect_recall: f64,
    worst_case_f1pa: f64,
    worst_case_precision_pa: f64,
    prob_f1pa_at_least_level_bernoulli: f64,
    prob_f1pa_at_least_level_exact: f64,
    mean_f1pa_exact: f64,
}

#[derive(Debug, Serialize)]
struct AttackReport {
    manifest: &'static str,
    points: usize,
    events: usize,
    contamination: f64,
    alpha: usize,
    seed: u64,
    trials: u64,
    level: f64,
    protocols: Vec<ProtocolSummary>,
    analytic: Option<Analytic>,
}

fn quantile(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let (lo, hi) = (pos.floor() as usize, pos.ceil() as usize);
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

fn summarize(protocol: Protocol, reports: &[&ProtocolReport], level: f64) -> ProtocolSummary {
    let n = reports.len() as f64;
    let mean = |f: fn(&ProtocolReport) -> f64| reports.iter().map(|r| f(r)).sum::<f64>() / n;
    let mut f1: Vec<f64> = reports.iter().map(|r| r.f1).collect();
    f1.sort_by(f64::total_cmp);
    ProtocolSummary {
        protocol,
        deprecated_protocol: protocol.is_deprecated(),
        mean_precision: mean(|r| r.precision),
        mean_recall: mean(|r| r.recall),
        mean_f1: mean(|r| r.f1),
        f1_min: f1[0],
        f1_p05: quantile(&f1, 0.05),
        f1_median: quantile(&f1, 0.5),
        f1_p95: quantile(&f1, 0.95),
        f1_max: f1[f1.len() - 1],
        prob_f1_at_least_level: f1.iter().filter(|&&x| x >= level).count() as f64 / n,
    }
}

fn analytic(labels: &LabelSeries, args: &AttackArgs) -> Result<Option<Analytic>> {
    if labels.events().len() != 1 {
        return Ok(None);
    }
    let setup = AttackSetup::from_labels(labels, args.alpha, args.seed)?;
    let bernoulli = f1pa_distribution(&setup, ProbabilityModel::BernoulliApprox)?;
    let exact = f1pa_distribution(&setup, ProbabilityModel::ExactHypergeometric)?;
    let a = setup.anomalous_length;
    Ok(Some(Analytic {
        contamination: setup.contamination(),
        prob_perfect_recall: prob_perfect_recall(setup.contamination(), args.alpha),
        worst_case_f1pa: worst_case_f1pa(a, args.alpha),
        worst_case_precision_pa: worst_case_precision_pa(a, args.alpha),
        prob_f1pa_at_least_level_bernoulli: bernoulli.prob_at_least(args.level),
        prob_f1pa_at_least_level_exact: exact.prob_at_least(args.level),
        mean_f1pa_exact: exact.mean_f1(),
    }))
}

fn attack_labels(run: &mut Run, args: &AttackArgs) -> Result<LabelSeries> {
    if let Some(path) = &args.labels {
        run.input("labels", path)?;
        return Ok(load_labels(path)?);
    }
    if let Some(path) = &args.spec {
        run.input("spec", path)?;
        let spec = SyntheticSpec::load(path)?;
        run.seed(spec.seed);
        let frame = generate_synthetic(&spec)?;
        return frame
            .labels()
            .cloned()
            .ok_or_else(|| CliError::Usage("synthetic frame has no labels".into()));
    }
    match (args.total_points, args.anomalous_length) {
        // alpha is checked against the series length by the attack itself
        (Some(t), Some(a)) => Ok(AttackSetup::new(t, a, 1, args.seed)?.single_segment_labels()),
        _ => Err(CliError::Usage(
            "give --labels, --spec or --total-points with --anomalous-length".into(),
        )),
    }
}

#[derive(Serialize)]
struct TrialRow {
    trial: u64,
    protocol: Protocol,
    precision: f64,
    recall: f64,
    f1: f64,
}

pub fn run(out: Option<PathBuf>, args: AttackArgs) -> Result<()> {
    if args.trials == 0 {
        return Err(CliError::Usage("--trials must be at least 1".into()));
    }
    let mut run = Run::new(out, "attack", &args)?;
    run.seed(args.seed);
    let labels = attack_labels(&mut run, &args)?;
    let per_trial = attack_reports(&labels, args.alpha, args.seed, args.trials, &args.protocols)?;

    let summaries: Vec<ProtocolSummary> = args
        .protocols
        .iter()
        .enumerate()
        .map(|(i, &p)| {
            let column: Vec<&ProtocolReport> = per_trial.iter().map(|row| &row[i]).collect();
            summarize(p, &column, args.level)
        })
        .collect();
    let analytic = analytic(&labels, &args)?;

    println!(
        "T={} events={} r={:.6} alpha={} trials={} seed={}",
        labels.len(),
        labels.events().len(),
        labels.contamination_rate(),
        args.alpha,
        args.trials,
        args.seed
    );
    println!(
        "{:<14} {:>9} {:>9} {:>9} {:>9} {:>12}",
        "protocol",
        "mean_f1",
        "p05",
        "median",
        "p95",
        format!("P(f1>={})", args.level)
    );
    for s in &summaries {
        println!(
            "{:<14} {:>9.6} {:>9.6} {:>9.6} {:>9.6} {:>12.6}{}",
            s.protocol.name(),
            s.mean_f1,
            s.f1_p05,
            s.f1_median,
            s.f1_p95,
            s.prob_f1_at_least_level,
            if s.deprecated_protocol {
                "  (deprecated)"
            } else {
                ""
            }
        );
    }
    if let Some(a) = &analytic {
        println!("analytic: P(perfect recall)={:.6}", a.prob_perfect_recall);
        println!(
            "analytic: worst-case F1_pa={:.6} precision_pa={:.6}",
            a.worst_case_f1pa, a.worst_case_precision_pa
        );
        println!(
            "analytic: P(F1_pa>={}) bernoulli={:.6} exact={:.6}; mean F1_pa exact={:.6}",
            args.level,
            a.prob_f1pa_at_least_level_bernoulli,
            a.prob_f1pa_at_least_level_exact,
            a.mean_f1pa_exact
        );
    }

    let report = AttackReport {
        manifest: MANIFEST_FILE,
        points: labels.len(),
        events: labels.events().len(),
        contamination: labels.contamination_rate(),
        alpha: args.alpha,
        seed: args.seed,
        trials: args.trials,
        level: args.level,
        protocols: summaries,
        analytic,
    };
    run.write_json("report.json", &report)?;
    run.write("report.csv", &rows_csv(&report.protocols)?)?;
    if run.has_out_dir() {
        let trial_rows: Vec<TrialRow> = per_trial
            .iter()
            .enumerate()
            .flat_map(|(t, row)| {
                row.iter().map(move |r| TrialRow {
                    trial: t as u64,
                    protocol: r.protocol,
                    precision: r.precision,
                    recall: r.recall,
                    f1: r.f1,
                })
            })
            .collect();
        run.write("trials.csv", &rows_csv(&trial_rows)?)?;
    }
    run.finish()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quantiles_interpolate() {
        let v = [0.0, 1.0, 2.0, 3.0, 4.0];
        assert_eq!(quantile(&v, 0.5), 2.0);
        assert_eq!(quantile(&v, 0.05), 0.2);
        assert_eq!(quantile(&[7.0], 0.95), 7.0);
    }
}
