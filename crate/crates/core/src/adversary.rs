//! The random-guess attack on point-adjust scoring.
//!
//! An attacker flags `alpha` distinct points uniformly at random. With a single
//! anomalous segment of length `A` inside `T` points, any hit in the segment
//! yields perfect adjusted recall, and `s >= 1` hits give
//! `F1_pa = 2A / (2A + alpha - s)`.

use std::io::Write;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{Binomial, Discrete};
use statrs::function::factorial::ln_binomial;

use crate::error::{Error, Result};
use crate::metrics::{LabelSeries, PredictionSeries, Segment};
use crate::protocols::{score_all, score_point_adjust, Protocol, ProtocolReport};

/// Parameters of the attack against a single-segment series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackSetup {
    pub total_points: usize,
    pub anomalous_length: usize,
    pub alpha: usize,
    pub seed: u64,
}

impl AttackSetup {
    pub fn new(
        total_points: usize,
        anomalous_length: usize,
        alpha: usize,
        seed: u64,
    ) -> Result<Self> {
        let setup = AttackSetup {
            total_points,
            anomalous_length,
            alpha,
            seed,
        };
        setup.validate()?;
        Ok(setup)
    }

    /// Derives a setup from labels, which must hold exactly one event.
    pub fn from_labels(labels: &LabelSeries, alpha: usize, seed: u64) -> Result<Self> {
        match labels.events() {
            [event] => Self::new(labels.len(), event.len(), alpha, seed),
            events => Err(Error::InvalidSetup(format!(
                "closed forms need exactly one anomalous segment, found {}",
                events.len()
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (t, a, alpha) = (self.total_points, self.anomalous_length, self.alpha);
        if a == 0 || a >= t {
            return Err(Error::InvalidSetup(format!(
                "need 1 <= anomalous_length < total_points, got A={a}, T={t}"
            )));
        }
        if alpha == 0 || alpha > t {
            return Err(Error::InvalidSetup(format!(
                "need 1 <= alpha <= total_points, got alpha={alpha}, T={t}"
            )));
        }
        Ok(())
    }

    /// `A / T`.
    pub fn contamination(&self) -> f64 {
        self.anomalous_length as f64 / self.total_points as f64
    }

    /// A series of `T` points whose single event is centred.
    pub fn single_segment_labels(&self) -> LabelSeries {
        let start = (self.total_points - self.anomalous_length) / 2;
        let mut values = vec![false; self.total_points];
        values[start..start + self.anomalous_length].fill(true);
        LabelSeries::new(values)
    }

    pub fn worst_case_f1pa(&self) -> f64 {
        worst_case_f1pa(self.anomalous_length, self.alpha)
    }
}

/// Probability that at least one of `alpha` independent draws lands on an anomaly: `1 - (1 - r)^alpha`.
pub fn prob_perfect_recall(r: f64, alpha: usize) -> f64 {
    1.0 - (1.0 - r).powf(alpha as f64)
}

/// Adjusted F1 when exactly one of `alpha` flags hits a segment of length `a`: `2A / (2A + alpha - 1)`.
pub fn worst_case_f1pa(a: usize, alpha: usize) -> f64 {
    f1_for_hits(a, alpha, 1)
}

/// Adjusted precision in the same situation: `A / (A + alpha - 1)`.
pub fn worst_case_precision_pa(a: usize, alpha: usize) -> f64 {
    let a = a as f64;
    a / (a + alpha as f64 - 1.0)
}

/// Adjusted F1 for `hits` flags inside the segment, 0 for no hit.
pub fn f1_for_hits(a: usize, alpha: usize, hits: usize) -> f64 {
    if hits == 0 {
        return 0.0;
    }
    let two_a = 2.0 * a as f64;
    two_a / (two_a + alpha as f64 - hits as f64)
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProbabilityModel {
    /// Independent draws, hits ~ Binomial(alpha, r).
    #[default]
    BernoulliApprox,
    /// Distinct draws, hits ~ Hypergeometric(T, A, alpha).
    ExactHypergeometric,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupportPoint {
    pub hits: usize,
    pub f1: f64,
    pub probability: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CdfPoint {
    pub threshold: f64,
    pub cumulative: f64,
}

/// Distribution of `F1_pa` over the number of hits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct F1paDistribution {
    pub support: Vec<SupportPoint>,
    pub cdf: Vec<CdfPoint>,
}

impl F1paDistribution {
    /// Builds the CDF from support points sorted by hit count.
    fn from_support(support: Vec<SupportPoint>) -> Self {
        let mut running = 0.0;
        let cdf = support
            .iter()
            .map(|p| {
                running += p.probability;
                CdfPoint {
                    threshold: p.f1,
                    cumulative: running,
                }
            })
            .collect();
        F1paDistribution { support, cdf }
    }

    /// `P(F1_pa = 0)`, the probability of missing the segment entirely.
    pub fn prob_miss(&self) -> f64 {
        self.support
            .iter()
            .filter(|p| p.hits == 0)
            .map(|p| p.probability)
            .sum()
    }

    /// `P(F1_pa <= x)`.
    pub fn cdf_at(&self, x: f64) -> f64 {
        self.support
            .iter()
            .filter(|p| p.f1 <= x)
            .map(|p| p.probability)
            .sum()
    }

    /// `P(F1_pa >= x)`.
    pub fn prob_at_least(&self, x: f64) -> f64 {
        self.support
            .iter()
            .filter(|p| p.f1 >= x)
            .map(|p| p.probability)
            .sum()
    }

    pub fn mean_f1(&self) -> f64 {
        self.support.iter().map(|p| p.f1 * p.probability).sum()
    }

    /// Writes `s,f1_value,probability,cumulative` rows.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(["s", "f1_value", "probability", "cumulative"])?;
        for (p, c) in self.support.iter().zip(&self.cdf) {
            w.write_record([
                p.hits.to_string(),
                p.f1.to_string(),
                p.probability.to_string(),
                c.cumulative.to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Closed-form distribution of `F1_pa` for hit counts `0..=alpha`.
pub fn f1pa_distribution(setup: &AttackSetup, model: ProbabilityModel) -> Result<F1paDistribution> {
    setup.validate()?;
    let (t, a, alpha) = (
        setup.total_points as u64,
        setup.anomalous_length as u64,
        setup.alpha as u64,
    );
    let pmf: Box<dyn Fn(u64) -> f64> = match model {
        ProbabilityModel::BernoulliApprox => {
            let d = Binomial::new(setup.contamination(), alpha)
                .map_err(|e| Error::InvalidSetup(e.to_string()))?;
            Box::new(move |s| d.pmf(s))
        }
        ProbabilityModel::ExactHypergeometric => {
            // Log space: the factorial-based pmf overflows for large populations.
            let ln_total = ln_binomial(t, alpha);
            Box::new(move |s| {
                if s > a || alpha - s > t - a {
                    0.0
                } else {
                    (ln_binomial(a, s) + ln_binomial(t - a, alpha - s) - ln_total).exp()
                }
            })
        }
    };
    let support = (0..=setup.alpha)
        .map(|s| SupportPoint {
            hits: s,
            f1: f1_for_hits(setup.anomalous_length, setup.alpha, s),
            probability: pmf(s as u64),
        })
        .collect();
    Ok(F1paDistribution::from_support(support))
}

fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn random_flags(len: usize, alpha: usize, rng: &mut ChaCha8Rng) -> Vec<bool> {
    let mut flags = vec![false; len];
    for i in sample(rng, len, alpha) {
        flags[i] = true;
    }
    flags
}

/// Flags `alpha` distinct points drawn uniformly without replacement.
pub fn run_attack(labels: &LabelSeries, alpha: usize, seed: u64) -> Result<PredictionSeries> {
    attack_trial(labels, alpha, seed, 0)
}

/// One attack draw using the sub-seed derived from `(seed, trial)`.
pub fn attack_trial(
    labels: &LabelSeries,
    alpha: usize,
    seed: u64,
    trial: u64,
) -> Result<PredictionSeries> {
    if alpha > labels.len() {
        return Err(Error::AlphaTooLarge {
            alpha,
            len: labels.len(),
        });
    }
    let mut rng = trial_rng(seed, trial);
    Ok(PredictionSeries::new(random_flags(
        labels.len(),
        alpha,
        &mut rng,
    )))
}

/// Scores `trials` independent attack draws under each protocol.
/// Row `i` holds the reports of trial `i`, in `protocols` order.
pub fn attack_reports(
    labels: &LabelSeries,
    alpha: usize,
    seed: u64,
    trials: u64,
    protocols: &[Protocol],
) -> Result<Vec<Vec<ProtocolReport>>> {
    if alpha == 0 {
        return Err(Error::InvalidSetup("alpha must be at least 1".into()));
    }
    (0..trials)
        .into_par_iter()
        .map(|trial| {
            score_all(
                labels,
                &attack_trial(labels, alpha, seed, trial)?,
                protocols,
            )
        })
        .collect()
}

/// Empirical `F1_pa` distribution from `trials` scored attack draws.
///
/// Only hit counts observed at least once appear in the support.
pub fn monte_carlo_f1pa(setup: &AttackSetup, trials: u64) -> Result<F1paDistribution> {
    setup.validate()?;
    if trials == 0 {
        return Err(Error::InvalidSetup("trials must be at least 1".into()));
    }
    let labels = setup.single_segment_labels();
    let outcomes: Vec<(usize, f64)> = (0..trials)
        .into_par_iter()
        .map(|trial| {
            let preds = attack_trial(&labels, setup.alpha, setup.seed, trial)?;
            let hits = hits_inside(labels.events()[0], &preds);
            let report = score_point_adjust(&labels, &preds)?;
            Ok((hits, report.f1))
        })
        .collect::<Result<_>>()?;

    let mut tally: Vec<Option<(u64, f64)>> = vec![None; setup.alpha + 1];
    for (hits, f1) in outcomes {
        let slot = tally[hits].get_or_insert((0, f1));
        slot.0 += 1;
    }
    let support = tally
        .into_iter()
        .enumerate()
        .filter_map(|(hits, slot)| {
            slot.map(|(count, f1)| SupportPoint {
                hits,
                f1,
                probability: count as f64 / trials as f64,
            })
        })
        .collect();
    Ok(F1paDistribution::from_support(support))
}

fn hits_inside(event: Segment, preds: &PredictionSeries) -> usize {
    preds.decisions()[event.start..=event.end]
        .iter()
        .filter(|&&d| d)
        .count()
}

/// One row of the worst-case curves.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WorstCaseRow {
    pub alpha: usize,
    pub p_perfect_recall: f64,
    pub worst_f1pa: f64,
    pub worst_precision_pa: f64,
}

pub fn fig5_worst_curves(
    a: usize,
    r: f64,
    alphas: impl IntoIterator<Item = usize>,
) -> Vec<WorstCaseRow> {
    alphas
        .into_iter()
        .map(|alpha| WorstCaseRow {
            alpha,
            p_perfect_recall: prob_perfect_recall(r, alpha),
            worst_f1pa: worst_case_f1pa(a, alpha),
            worst_precision_pa: worst_case_precision_pa(a, alpha),
        })
        .collect()
}

pub fn write_worst_curves_csv<W: Write>(rows: &[WorstCaseRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record([
        "alpha",
        "p_perfect_recall",
        "worst_f1pa",
        "worst_precision_pa",
    ])?;
    for row in rows {
        w.write_record([
            row.alpha.to_string(),
            row.p_perfect_recall.to_string(),
            row.worst_f1pa.to_string(),
            row.worst_precision_pa.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}
