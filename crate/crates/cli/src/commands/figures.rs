//! Plot-data tables. Without an output directory the CSV goes to stdout.

use std::io::Write;
use std::path::PathBuf;

use anomeval::adversary::{
    f1pa_distribution, fig5_worst_curves, monte_carlo_f1pa, write_worst_curves_csv, AttackSetup,
    ProbabilityModel,
};
use anomeval::study::{fig4_table, log_grid};

use crate::args::{CdfArgs, ModelArg, StudyArgs, WorstArgs};
use crate::error::{CliError, Result};
use crate::output::{csv_bytes, Run};

fn emit(run: &Run, name: &str, bytes: &[u8]) -> Result<()> {
    if run.has_out_dir() {
        run.write(name, bytes)
    } else {
        std::io::stdout().write_all(bytes)?;
        Ok(())
    }
}

pub fn cdf(out: Option<PathBuf>, args: CdfArgs) -> Result<()> {
    let mut run = Run::new(out, "fig23", &args)?;
    run.seed(args.seed);
    let setup = AttackSetup::new(
        args.total_points,
        args.anomalous_length,
        args.alpha,
        args.seed,
    )?;
    let model = match args.model {
        ModelArg::Bernoulli => ProbabilityModel::BernoulliApprox,
        ModelArg::Exact => ProbabilityModel::ExactHypergeometric,
    };
    let dist = f1pa_distribution(&setup, model)?;
    emit(&run, "cdf.csv", &csv_bytes(|w| dist.write_csv(w))?)?;
    let simulated = if args.trials > 0 {
        let mc = monte_carlo_f1pa(&setup, args.trials)?;
        emit(
            &run,
            "cdf_monte_carlo.csv",
            &csv_bytes(|w| mc.write_csv(w))?,
        )?;
        Some(mc)
    } else {
        None
    };
    if run.has_out_dir() {
        println!(
            "T={} A={} alpha={} r={:.6}",
            setup.total_points,
            setup.anomalous_length,
            setup.alpha,
            setup.contamination()
        );
        println!("P(F1_pa = 0)        {:.6}", dist.prob_miss());
        println!("mean F1_pa          {:.6}", dist.mean_f1());
        println!("worst-case F1_pa    {:.6}", setup.worst_case_f1pa());
        println!(
            "P(F1_pa <= worst)   {:.6}",
            dist.cdf_at(setup.worst_case_f1pa())
        );
        if let Some(mc) = &simulated {
            println!(
                "simulated P(F1_pa = 0) {:.6} over {} trials",
                mc.prob_miss(),
                args.trials
            );
        }
    }
    run.finish()
}

pub fn study(out: Option<PathBuf>, args: StudyArgs) -> Result<()> {
    if !(args.far_min > 0.0 && args.far_min <= args.far_max) {
        return Err(CliError::Usage("need 0 < --far-min <= --far-max".into()));
    }
    let run = Run::new(out, "fig4", &args)?;
    let fars = log_grid(args.far_min, args.far_max, args.points);
    let table = fig4_table(args.recall, &fars, &args.shapes)?;
    emit(&run, "fig4.csv", &csv_bytes(|w| table.write_csv(w))?)?;
    if run.has_out_dir() {
        println!(
            "recall={} fars={} shapes={}",
            args.recall,
            fars.len(),
            args.shapes.len()
        );
        if let (Some(first), Some(last)) = (table.f1.first(), table.f1.last()) {
            println!("F1 at far={}: {first:?}", fars[0]);
            println!("F1 at far={}: {last:?}", fars[fars.len() - 1]);
        }
    }
    run.finish()
}

pub fn worst(out: Option<PathBuf>, args: WorstArgs) -> Result<()> {
    if args.anomalous_length == 0 || args.alpha_max == 0 {
        return Err(CliError::Usage(
            "--anomalous-length and --alpha-max must be positive".into(),
        ));
    }
    if !(0.0..=1.0).contains(&args.contamination) {
        return Err(CliError::Usage("--contamination must lie in [0, 1]".into()));
    }
    let run = Run::new(out, "fig5", &args)?;
    let rows = fig5_worst_curves(
        args.anomalous_length,
        args.contamination,
        1..=args.alpha_max,
    );
    emit(
        &run,
        "fig5.csv",
        &csv_bytes(|w| write_worst_curves_csv(&rows, w))?,
    )?;
    if run.has_out_dir() {
        println!("{} rows, alpha 1..={}", rows.len(), args.alpha_max);
    }
    run.finish()
}
