//! Seeded synthetic multivariate series with injected anomalous events.
//!
//! The normal regime mixes a low-dimensional AR(1) latent process into `D`
//! channels and adds AR(1) channel noise, so a principal subspace exists.
//! RNG streams: 0 mixing matrix, 1 test noise, 2 event layout and
//! signatures, 3 training noise.

use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::MvtsFrame;
use crate::error::{Error, Result};
use crate::metrics::{paint, LabelSeries, Segment};

const LATENT_PHI: f64 = 0.9;
const NOISE_PHI: f64 = 0.5;
const NOISE_SD: f64 = 0.3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AnomalySignal {
    MeanShift,
    VarianceBurst,
    ChannelDrift,
}

fn default_channels() -> usize {
    8
}
fn default_min_gap() -> usize {
    10
}
fn default_magnitude() -> f64 {
    3.0
}

/// Layout and signal of a synthetic dataset. `seed` is mandatory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyntheticSpec {
    pub total_points: usize,
    #[serde(default)]
    pub event_lengths: Vec<usize>,
    #[serde(default = "default_channels")]
    pub channels: usize,
    pub anomaly_signal: AnomalySignal,
    /// Minimum count of normal points between consecutive events.
    #[serde(default = "default_min_gap")]
    pub min_gap: usize,
    /// Anomaly size in units of the affected channel's standard deviation.
    #[serde(default = "default_magnitude")]
    pub magnitude: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let spec: SyntheticSpec = toml::from_str(text)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        if self.channels == 0 {
            return Err(Error::InvalidConfig("channels must be at least 1".into()));
        }
        if self.event_lengths.contains(&0) {
            return Err(Error::InvalidConfig(
                "event lengths must be positive".into(),
            ));
        }
        if self.event_lengths.iter().sum::<usize>() >= self.total_points {
            return Err(Error::InfeasibleLayout(
                "events must leave at least one normal point".into(),
            ));
        }
        if !self.magnitude.is_finite() || self.magnitude < 0.0 {
            return Err(Error::InvalidConfig(
                "magnitude must be finite and non-negative".into(),
            ));
        }
        Ok(())
    }

    pub fn contamination(&self) -> f64 {
        self.event_lengths.iter().sum::<usize>() as f64 / self.total_points as f64
    }
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn normal(rng: &mut impl Rng) -> f64 {
    rng.sample(StandardNormal)
}

/// Places events of the given lengths (in shuffled order) uniformly at random,
/// separated by at least `min_gap` points.
pub fn place_events(
    lengths: &[usize],
    total_points: usize,
    min_gap: usize,
    rng: &mut impl Rng,
) -> Result<Vec<Segment>> {
    if lengths.is_empty() {
        return Ok(Vec::new());
    }
    let required = lengths.iter().sum::<usize>() + (lengths.len() - 1) * min_gap;
    if required > total_points {
        return Err(Error::InfeasibleLayout(format!(
            "{} events need {required} points with gaps, series has {total_points}",
            lengths.len()
        )));
    }
    let slack = total_points - required;
    let mut order = lengths.to_vec();
    order.shuffle(rng);
    let mut offsets: Vec<usize> = (0..order.len())
        .map(|_| rng.random_range(0..=slack))
        .collect();
    offsets.sort_unstable();

    let mut cursor = 0;
    Ok(order
        .iter()
        .zip(offsets)
        .map(|(&len, offset)| {
            let start = cursor + offset;
            cursor += len + min_gap;
            Segment::new(start, start + len - 1)
        })
        .collect())
}

struct NormalRegime {
    mixing: Vec<Vec<f64>>,
    channel_sd: Vec<f64>,
}

impl NormalRegime {
    fn new(spec: &SyntheticSpec) -> Self {
        let d = spec.channels;
        let latent = d.div_ceil(3);
        let mut rng = stream(spec.seed, 0);
        let mixing: Vec<Vec<f64>> = (0..d)
            .map(|_| (0..latent).map(|_| normal(&mut rng)).collect())
            .collect();
        let channel_sd = mixing
            .iter()
            .map(|row| (row.iter().map(|m| m * m).sum::<f64>() + NOISE_SD * NOISE_SD).sqrt())
            .collect();
        NormalRegime { mixing, channel_sd }
    }

    fn sample(&self, rows: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
        let d = self.mixing.len();
        let latent_dim = self.mixing[0].len();
        let latent_innov = (1.0 - LATENT_PHI * LATENT_PHI).sqrt();
        let noise_innov = NOISE_SD * (1.0 - NOISE_PHI * NOISE_PHI).sqrt();
        let mut z: Vec<f64> = (0..latent_dim).map(|_| normal(rng)).collect();
        let mut e: Vec<f64> = (0..d).map(|_| NOISE_SD * normal(rng)).collect();
        let mut values = Vec::with_capacity(rows * d);
        for _ in 0..rows {
            for zj in z.iter_mut() {
                *zj = LATENT_PHI * *zj + latent_innov * normal(rng);
            }
            for (c, ec) in e.iter_mut().enumerate() {
                *ec = NOISE_PHI * *ec + noise_innov * normal(rng);
                let mixed: f64 = self.mixing[c].iter().zip(&z).map(|(m, zj)| m * zj).sum();
                values.push(mixed + *ec);
            }
        }
        values
    }
}

fn inject(
    values: &mut [f64],
    d: usize,
    event: Segment,
    spec: &SyntheticSpec,
    channel_sd: &[f64],
    rng: &mut ChaCha8Rng,
) {
    let sign = |rng: &mut ChaCha8Rng| if rng.random_bool(0.5) { 1.0 } else { -1.0 };
    let pick_channels = |rng: &mut ChaCha8Rng| {
        let mut chosen: Vec<usize> = (0..d).filter(|_| rng.random_bool(0.5)).collect();
        if chosen.is_empty() {
            chosen.push(rng.random_range(0..d));
        }
        chosen
    };
    match spec.anomaly_signal {
        AnomalySignal::MeanShift => {
            let shifts: Vec<(usize, f64)> = pick_channels(rng)
                .into_iter()
                .map(|c| (c, sign(rng) * spec.magnitude * channel_sd[c]))
                .collect();
            for t in event.start..=event.end {
                for &(c, shift) in &shifts {
                    values[t * d + c] += shift;
                }
            }
        }
        AnomalySignal::VarianceBurst => {
            let channels = pick_channels(rng);
            for t in event.start..=event.end {
                for &c in &channels {
                    values[t * d + c] += spec.magnitude * channel_sd[c] * normal(rng);
                }
            }
        }
        AnomalySignal::ChannelDrift => {
            let c = rng.random_range(0..d);
            let peak = sign(rng) * spec.magnitude * channel_sd[c];
            let len = event.len() as f64;
            for (k, t) in (event.start..=event.end).enumerate() {
                values[t * d + c] += peak * (k + 1) as f64 / len;
            }
        }
    }
}

/// A labelled test frame with the spec's events injected.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<MvtsFrame> {
    spec.validate()?;
    let d = spec.channels;
    let regime = NormalRegime::new(spec);
    let mut values = regime.sample(spec.total_points, &mut stream(spec.seed, 1));

    let mut layout_rng = stream(spec.seed, 2);
    let events = place_events(
        &spec.event_lengths,
        spec.total_points,
        spec.min_gap,
        &mut layout_rng,
    )?;
    for &event in &events {
        inject(
            &mut values,
            d,
            event,
            spec,
            &regime.channel_sd,
            &mut layout_rng,
        );
    }
    let labels = LabelSeries::new(paint(&events, spec.total_points));
    MvtsFrame::new(super::default_channel_names(d), values, Some(labels))
}

/// An anomaly-free, unlabelled frame from the same normal regime with independent noise.
pub fn generate_training(spec: &SyntheticSpec, rows: usize) -> Result<MvtsFrame> {
    spec.validate()?;
    let regime = NormalRegime::new(spec);
    let values = regime.sample(rows, &mut stream(spec.seed, 3));
    MvtsFrame::new(super::default_channel_names(spec.channels), values, None)
}
