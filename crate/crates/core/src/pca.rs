//! PCA reconstruction-error detector with robust input scaling, clipping and
//! causal score smoothing, plus the threshold sweep used to report it.

use std::fs;
use std::path::Path;

use nalgebra::{DMatrix, SymmetricEigen};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::MvtsFrame;
use crate::error::{ensure_same_len, Error, Result};
use crate::metrics::{
    confusion_of, precision_recall_f1, ConfusionCounts, LabelSeries, PredictionSeries,
};
use crate::protocols::{Protocol, ProtocolReport};

const MODEL_FORMAT: &str = "anomeval-pca";
const MODEL_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PcaConfig {
    /// Fraction of total variance the kept components must reach.
    pub variance_target: f64,
    /// Lower and upper clipping quantiles of the scaled training data.
    pub clip_quantiles: (f64, f64),
    pub smooth_window: usize,
}

impl Default for PcaConfig {
    fn default() -> Self {
        PcaConfig {
            variance_target: 0.9,
            clip_quantiles: (0.001, 0.999),
            smooth_window: 5,
        }
    }
}

impl PcaConfig {
    /// Parses a TOML config; omitted fields take their defaults.
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let config: PcaConfig = toml::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&fs::read_to_string(path)?)
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.clip_quantiles;
        if !(self.variance_target > 0.0 && self.variance_target <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "variance_target must lie in (0, 1], got {}",
                self.variance_target
            )));
        }
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
            return Err(Error::InvalidConfig(format!(
                "clip quantiles must satisfy 0 <= low <= high <= 1, got ({lo}, {hi})"
            )));
        }
        if self.smooth_window == 0 {
            return Err(Error::InvalidConfig(
                "smooth_window must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// A fitted detector. `components` holds `k` orthonormal vectors of length `D`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredModel {
    pub format: String,
    pub version: u32,
    pub center: Vec<f64>,
    pub spread: Vec<f64>,
    pub clip_low: Vec<f64>,
    pub clip_high: Vec<f64>,
    /// Mean of the scaled, clipped training data.
    pub mean: Vec<f64>,
    pub components: Vec<Vec<f64>>,
    /// Eigenvalues of all `D` directions, descending.
    pub eigenvalues: Vec<f64>,
    pub n_components: usize,
    pub smooth_window: usize,
}

/// Linear-interpolation quantile of sorted data.
fn quantile_sorted(sorted: &[f64], q: f64) -> f64 {
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (sorted[hi] - sorted[lo]) * (pos - lo as f64)
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

/// Picks the sign of each eigenvector so its largest-magnitude entry is positive.
fn canonical_sign(v: &mut [f64]) {
    let pivot = v
        .iter()
        .copied()
        .fold(0.0f64, |acc, x| if x.abs() > acc.abs() { x } else { acc });
    if pivot < 0.0 {
        v.iter_mut().for_each(|x| *x = -*x);
    }
}

/// Smallest `k` whose leading eigenvalues reach `target` of the total.
fn select_components(eigenvalues: &[f64], target: f64) -> usize {
    let total: f64 = eigenvalues.iter().sum();
    if total <= 0.0 {
        return 1;
    }
    let mut running = 0.0;
    for (i, ev) in eigenvalues.iter().enumerate() {
        running += ev;
        if running / total >= target {
            return i + 1;
        }
    }
    eigenvalues.len()
}

pub fn fit(train: &MvtsFrame, config: &PcaConfig) -> Result<ScoredModel> {
    config.validate()?;
    let t = train.rows();
    let d = train.channels();
    if t < 2 {
        return Err(Error::TooFewRows(t));
    }

    let mut center = Vec::with_capacity(d);
    let mut spread = Vec::with_capacity(d);
    for c in 0..d {
        let col = sorted(train.column(c));
        let med = quantile_sorted(&col, 0.5);
        let iqr = quantile_sorted(&col, 0.75) - quantile_sorted(&col, 0.25);
        center.push(med);
        spread.push(if iqr > 0.0 {
            iqr
        } else {
            log::warn!("channel {c} has zero interquartile range; using unit spread");
            1.0
        });
    }

    let scaled: Vec<f64> = train
        .iter_rows()
        .flat_map(|row| {
            (0..d)
                .map(|c| (row[c] - center[c]) / spread[c])
                .collect::<Vec<_>>()
        })
        .collect();

    let (lo_q, hi_q) = config.clip_quantiles;
    let mut clip_low = Vec::with_capacity(d);
    let mut clip_high = Vec::with_capacity(d);
    for c in 0..d {
        let col = sorted(scaled.iter().skip(c).step_by(d).copied().collect());
        clip_low.push(quantile_sorted(&col, lo_q));
        clip_high.push(quantile_sorted(&col, hi_q));
    }

    let clipped: Vec<f64> = scaled
        .iter()
        .enumerate()
        .map(|(i, &v)| v.clamp(clip_low[i % d], clip_high[i % d]))
        .collect();

    let mut mean = vec![0.0; d];
    for row in clipped.chunks_exact(d) {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= t as f64);

    let centered = DMatrix::from_fn(t, d, |r, c| clipped[r * d + c] - mean[c]);
    let cov = (centered.transpose() * &centered) / (t - 1) as f64;
    let eig = SymmetricEigen::new(cov);

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i].max(0.0)).collect();
    let k = select_components(&eigenvalues, config.variance_target);
    let components = order[..k]
        .iter()
        .map(|&i| {
            let mut v: Vec<f64> = eig.eigenvectors.column(i).iter().copied().collect();
            canonical_sign(&mut v);
            v
        })
        .collect();

    Ok(ScoredModel {
        format: MODEL_FORMAT.into(),
        version: MODEL_VERSION,
        center,
        spread,
        clip_low,
        clip_high,
        mean,
        components,
        eigenvalues,
        n_components: k,
        smooth_window: config.smooth_window,
    })
}

/// Squared norm of `x` minus its projection onto the span of `basis` (orthonormal rows).
pub fn reconstruction_error(basis: &[Vec<f64>], x: &[f64]) -> f64 {
    let mut recon = vec![0.0; x.len()];
    for b in basis {
        let coord: f64 = b.iter().zip(x).map(|(bi, xi)| bi * xi).sum();
        for (r, bi) in recon.iter_mut().zip(b) {
            *r += coord * bi;
        }
    }
    x.iter().zip(&recon).map(|(xi, ri)| (xi - ri).powi(2)).sum()
}

/// Trailing moving average; the first `w - 1` points average what is available.
pub fn smooth(scores: &[f64], window: usize) -> Vec<f64> {
    let window = window.max(1);
    if window == 1 {
        return scores.to_vec();
    }
    let mut out = Vec::with_capacity(scores.len());
    let mut sum = 0.0;
    for (i, &s) in scores.iter().enumerate() {
        sum += s;
        if i >= window {
            sum -= scores[i - window];
        }
        let n = (i + 1).min(window);
        out.push((sum / n as f64).max(0.0));
    }
    out
}

/// Non-negative, finite per-point anomaly scores.
#[derive(Debug, Clone, PartialEq)]
pub struct AnomalyScoreSeries {
    pub scores: Vec<f64>,
}

impl AnomalyScoreSeries {
    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }
}

impl ScoredModel {
    pub fn channels(&self) -> usize {
        self.center.len()
    }

    /// Scaled, clipped and centred copy of one row.
    fn prepare(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .enumerate()
            .map(|(c, &v)| {
                ((v - self.center[c]) / self.spread[c]).clamp(self.clip_low[c], self.clip_high[c])
                    - self.mean[c]
            })
            .collect()
    }

    /// Reconstruction errors before smoothing.
    pub fn raw_scores(&self, test: &MvtsFrame) -> Result<Vec<f64>> {
        if test.channels() != self.channels() {
            return Err(Error::ChannelMismatch {
                expected: self.channels(),
                found: test.channels(),
            });
        }
        Ok(test
            .iter_rows()
            .map(|row| reconstruction_error(&self.components, &self.prepare(row)))
            .collect())
    }

    pub fn score(&self, test: &MvtsFrame) -> Result<AnomalyScoreSeries> {
        Ok(AnomalyScoreSeries {
            scores: smooth(&self.raw_scores(test)?, self.smooth_window),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let model: ScoredModel = serde_json::from_str(text)?;
        if model.format != MODEL_FORMAT || model.version != MODEL_VERSION {
            return Err(Error::Model(format!(
                "unsupported model format {} v{}",
                model.format, model.version
            )));
        }
        let d = model.center.len();
        let consistent = [
            &model.spread,
            &model.clip_low,
            &model.clip_high,
            &model.mean,
        ]
        .iter()
        .all(|v| v.len() == d)
            && model.components.len() == model.n_components
            && model.components.iter().all(|c| c.len() == d)
            && (1..=d).contains(&model.n_components)
            && model.smooth_window >= 1;
        if !consistent {
            return Err(Error::Model("inconsistent dimensions".into()));
        }
        Ok(model)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

pub fn score(model: &ScoredModel, test: &MvtsFrame) -> Result<AnomalyScoreSeries> {
    model.score(test)
}

/// Best threshold and the report at that threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdChoice {
    /// Predictions are `score >= threshold`; `+inf` means nothing is flagged.
    pub threshold: f64,
    pub report: ProtocolReport,
}

/// Distinct score values, descending, preceded by `+inf`.
fn candidate_thresholds(scores: &[f64]) -> Vec<f64> {
    let mut values = sorted(scores.to_vec());
    values.dedup();
    values.reverse();
    let mut out = Vec::with_capacity(values.len() + 1);
    out.push(f64::INFINITY);
    out.extend(values);
    out
}

/// Evaluates `protocol` at every distinct score value (and `+inf`) and keeps the
/// best F1. Ties go to the larger threshold.
pub fn sweep_threshold(
    scores: &AnomalyScoreSeries,
    labels: &LabelSeries,
    protocol: Protocol,
) -> Result<ThresholdChoice> {
    sweep_scores(&scores.scores, labels, protocol)
}

pub fn sweep_scores(
    scores: &[f64],
    labels: &LabelSeries,
    protocol: Protocol,
) -> Result<ThresholdChoice> {
    if scores.is_empty() {
        return Err(Error::EmptyScores);
    }
    ensure_same_len(labels.len(), scores.len())?;
    let candidates = candidate_thresholds(scores);
    let threshold = match protocol {
        Protocol::PointWise => best_point_wise(scores, labels, &candidates),
        _ => {
            let f1s: Vec<f64> = candidates
                .par_iter()
                .map(|&th| {
                    protocol
                        .score(labels, &PredictionSeries::from_scores(scores, th))
                        .map(|r| r.f1)
                })
                .collect::<Result<_>>()?;
            let mut best = 0;
            for (i, &f) in f1s.iter().enumerate() {
                if f > f1s[best] {
                    best = i;
                }
            }
            candidates[best]
        }
    };
    let report = protocol.score(labels, &PredictionSeries::from_scores(scores, threshold))?;
    Ok(ThresholdChoice { threshold, report })
}

/// Incremental point-wise sweep: walks thresholds downward accumulating counts.
fn best_point_wise(scores: &[f64], labels: &LabelSeries, candidates: &[f64]) -> f64 {
    let mut idx: Vec<usize> = (0..scores.len()).collect();
    idx.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    let positives = labels.anomalous_count();
    let negatives = labels.len() - positives;

    let base = confusion_of(labels.values(), &vec![false; scores.len()]);
    let mut best_f1 = precision_recall_f1(&base).f1;
    let mut best_threshold = candidates[0];
    let (mut tp, mut fp) = (0usize, 0usize);
    let mut cursor = 0;
    for &th in &candidates[1..] {
        while cursor < idx.len() && scores[idx[cursor]] >= th {
            if labels.values()[idx[cursor]] {
                tp += 1;
            } else {
                fp += 1;
            }
            cursor += 1;
        }
        let counts = ConfusionCounts {
            tp,
            fp,
            fn_: positives - tp,
            tn: negatives - fp,
        };
        let f1 = precision_recall_f1(&counts).f1;
        if f1 > best_f1 {
            best_f1 = f1;
            best_threshold = th;
        }
    }
    best_threshold
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::{generate_synthetic, generate_training, AnomalySignal, SyntheticSpec};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use rand_distr::StandardNormal;

    fn gaussian_frame(rows: usize, d: usize, seed: u64) -> MvtsFrame {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data: Vec<Vec<f64>> = (0..rows)
            .map(|_| (0..d).map(|_| rng.sample(StandardNormal)).collect())
            .collect();
        MvtsFrame::from_rows(&data, None).unwrap()
    }

    fn gram_is_identity(model: &ScoredModel) -> bool {
        model.components.iter().enumerate().all(|(i, a)| {
            model.components.iter().enumerate().all(|(j, b)| {
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                (dot - if i == j { 1.0 } else { 0.0 }).abs() < 1e-8
            })
        })
    }

    #[test]
    fn config_from_toml() {
        let c = PcaConfig::from_toml_str("variance_target = 0.95\n").unwrap();
        assert_eq!(c.variance_target, 0.95);
        assert_eq!(c.smooth_window, 5);
        let c =
            PcaConfig::from_toml_str("clip_quantiles = [0.01, 0.99]\nsmooth_window = 1\n").unwrap();
        assert_eq!(c.clip_quantiles, (0.01, 0.99));
        assert!(PcaConfig::from_toml_str("smooth_window = 0\n").is_err());
        assert!(PcaConfig::from_toml_str("window = 3\n").is_err());
    }

    #[test]
    fn redundant_channel_reduces_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let data: Vec<Vec<f64>> = (0..500)
            .map(|_| {
                let x: f64 = rng.sample(StandardNormal);
                vec![x, 3.0 * x]
            })
            .collect();
        let frame = MvtsFrame::from_rows(&data, None).unwrap();
        let config = PcaConfig {
            variance_target: 0.99,
            ..Default::default()
        };
        let model = fit(&frame, &config).unwrap();
        assert!(model.n_components < 2);
        assert!(gram_is_identity(&model));
    }

    #[test]
    fn white_noise_needs_every_component() {
        let frame = gaussian_frame(2000, 5, 1);
        let config = PcaConfig {
            variance_target: 1.0,
            ..Default::default()
        };
        let model = fit(&frame, &config).unwrap();
        assert_eq!(model.n_components, 5);
        assert!(gram_is_identity(&model));
        let raw = model.raw_scores(&gaussian_frame(200, 5, 2)).unwrap();
        assert!(raw.iter().all(|&s| s <= 1e-8));
    }

    #[test]
    fn refit_is_byte_identical() {
        let frame = gaussian_frame(300, 4, 9);
        let a = fit(&frame, &PcaConfig::default()).unwrap();
        let b = fit(&frame, &PcaConfig::default()).unwrap();
        assert_eq!(a.to_json().unwrap(), b.to_json().unwrap());
    }

    #[test]
    fn fit_errors_and_warnings() {
        let one = gaussian_frame(1, 3, 0);
        assert!(matches!(
            fit(&one, &PcaConfig::default()),
            Err(Error::TooFewRows(1))
        ));

        let constant =
            MvtsFrame::from_rows(&[vec![1.0, 0.0], vec![1.0, 1.0], vec![1.0, 2.0]], None).unwrap();
        let model = fit(&constant, &PcaConfig::default()).unwrap();
        assert_eq!(model.spread[0], 1.0);

        let bad = PcaConfig {
            smooth_window: 0,
            ..Default::default()
        };
        assert!(fit(&constant, &bad).is_err());
    }

    #[test]
    fn subspace_points_score_zero() {
        // data on a line in 3-D
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let line = |t: f64| vec![t, 2.0 * t, -t];
        let train: Vec<Vec<f64>> = (0..400).map(|_| line(rng.sample(StandardNormal))).collect();
        let frame = MvtsFrame::from_rows(&train, None).unwrap();
        let config = PcaConfig {
            clip_quantiles: (0.0, 1.0),
            smooth_window: 1,
            ..Default::default()
        };
        let model = fit(&frame, &config).unwrap();
        let test: Vec<Vec<f64>> = (0..50).map(|i| line(i as f64 / 50.0 - 0.5)).collect();
        let s = model
            .score(&MvtsFrame::from_rows(&test, None).unwrap())
            .unwrap();
        assert!(s.scores.iter().all(|&v| v < 1e-12));
    }

    #[test]
    fn smoothing_conserves_spike_mass() {
        let mut raw = vec![0.0; 30];
        raw[10] = 7.0;
        assert_eq!(smooth(&raw, 1), raw);
        let s5 = smooth(&raw, 5);
        assert!((s5.iter().sum::<f64>() - 7.0).abs() < 1e-12);
        for (i, v) in s5.iter().enumerate() {
            let expect = if (10..15).contains(&i) {
                7.0 / 5.0
            } else {
                0.0
            };
            assert!((v - expect).abs() < 1e-12);
        }
    }

    #[test]
    fn clipped_values_saturate() {
        let frame = gaussian_frame(500, 3, 4);
        let model = fit(
            &frame,
            &PcaConfig {
                smooth_window: 1,
                ..Default::default()
            },
        )
        .unwrap();
        let bound = model.clip_high[1] * model.spread[1] + model.center[1];
        let at = MvtsFrame::from_rows(&[vec![0.0, bound, 0.0]], None).unwrap();
        let beyond = MvtsFrame::from_rows(&[vec![0.0, bound + 1e3, 0.0]], None).unwrap();
        let a = model.raw_scores(&at).unwrap()[0];
        let b = model.raw_scores(&beyond).unwrap()[0];
        assert!((a - b).abs() < 1e-9);
    }

    #[test]
    fn channel_mismatch() {
        let model = fit(&gaussian_frame(50, 3, 0), &PcaConfig::default()).unwrap();
        assert!(matches!(
            model.score(&gaussian_frame(5, 2, 0)),
            Err(Error::ChannelMismatch {
                expected: 3,
                found: 2
            })
        ));
    }

    #[test]
    fn model_round_trips_bit_exactly() {
        let model = fit(&gaussian_frame(300, 6, 8), &PcaConfig::default()).unwrap();
        let back = ScoredModel::from_json(&model.to_json().unwrap()).unwrap();
        assert_eq!(back, model);
        let bits = |m: &ScoredModel| -> Vec<u64> {
            m.components
                .iter()
                .flatten()
                .chain(&m.center)
                .chain(&m.spread)
                .map(|v| v.to_bits())
                .collect()
        };
        assert_eq!(bits(&back), bits(&model));
        let mut broken = model.clone();
        broken.mean.pop();
        assert!(ScoredModel::from_json(&broken.to_json().unwrap()).is_err());
    }

    #[test]
    fn rotation_invariance() {
        let basis = vec![vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]];
        let x = [0.3, -1.2, 2.5];
        let (c, s) = (0.6f64.cos(), 0.6f64.sin());
        let rot = |v: &[f64]| vec![c * v[0] - s * v[2], v[1], s * v[0] + c * v[2]];
        let rotated: Vec<Vec<f64>> = basis.iter().map(|b| rot(b)).collect();
        let e0 = reconstruction_error(&basis, &x);
        let e1 = reconstruction_error(&rotated, &rot(&x));
        assert!((e0 - 6.25).abs() < 1e-12);
        assert!((e0 - e1).abs() < 1e-12);
    }

    #[test]
    fn affine_channel_transforms_do_not_change_scores() {
        let spec = SyntheticSpec {
            total_points: 400,
            event_lengths: vec![30],
            channels: 5,
            anomaly_signal: AnomalySignal::MeanShift,
            min_gap: 10,
            magnitude: 3.0,
            seed: 21,
        };
        let train = generate_training(&spec, 600).unwrap();
        let test = generate_synthetic(&spec).unwrap();
        let scale = [2.0, 0.5, 10.0, 1.0, 3.0];
        let shift = [1.0, -4.0, 0.0, 100.0, 0.25];
        let transform = |f: &MvtsFrame| {
            let rows: Vec<Vec<f64>> = f
                .iter_rows()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .map(|(c, v)| v * scale[c] + shift[c])
                        .collect()
                })
                .collect();
            MvtsFrame::from_rows(&rows, None).unwrap()
        };
        let config = PcaConfig::default();
        let a = fit(&train, &config).unwrap().score(&test).unwrap();
        let b = fit(&transform(&train), &config)
            .unwrap()
            .score(&transform(&test))
            .unwrap();
        for (x, y) in a.scores.iter().zip(&b.scores) {
            assert!((x - y).abs() < 1e-8 * (1.0 + x.abs()));
        }
    }

    fn labels(bits: &[u8]) -> LabelSeries {
        LabelSeries::new(bits.iter().map(|&b| b == 1).collect())
    }

    #[test]
    fn sweep_on_label_valued_scores() {
        let l = labels(&[0, 0, 1, 1, 0, 1, 0]);
        let scores: Vec<f64> = l
            .values()
            .iter()
            .map(|&b| if b { 1.0 } else { 0.0 })
            .collect();
        let choice = sweep_scores(&scores, &l, Protocol::PointWise).unwrap();
        assert_eq!(choice.report.f1, 1.0);
        assert_eq!(choice.threshold, 1.0);
    }

    #[test]
    fn sweep_on_constant_scores() {
        let l = labels(&[0, 1, 1, 0, 0]);
        let choice = sweep_scores(&[0.4; 5], &l, Protocol::PointWise).unwrap();
        assert_eq!(choice.threshold, 0.4);
        assert!((choice.report.f1 - 0.8 / 1.4).abs() < 1e-12);
        let none = labels(&[0, 0, 0]);
        let choice = sweep_scores(&[0.4; 3], &none, Protocol::PointWise).unwrap();
        assert_eq!(choice.threshold, f64::INFINITY);
        assert_eq!(choice.report.f1, 0.0);
    }

    #[test]
    fn sweep_on_monotone_scores() {
        // anomaly occupies the last 6 of 20 points; scores increase with time
        let l = LabelSeries::new((0..20).map(|i| i >= 14).collect());
        let scores: Vec<f64> = (0..20).map(|i| (i as f64).sqrt()).collect();
        // brute force over every candidate
        let mut best = (f64::INFINITY, 0.0);
        for th in candidate_thresholds(&scores) {
            let f1 = Protocol::PointWise
                .score(&l, &PredictionSeries::from_scores(&scores, th))
                .unwrap()
                .f1;
            if f1 > best.1 {
                best = (th, f1);
            }
        }
        let choice = sweep_scores(&scores, &l, Protocol::PointWise).unwrap();
        assert_eq!(choice.threshold, best.0);
        assert_eq!(choice.threshold, scores[14]);
        assert_eq!(choice.report.f1, 1.0);
        for p in Protocol::ALL {
            assert_eq!(sweep_scores(&scores, &l, p).unwrap().report.f1, 1.0);
        }
    }

    #[test]
    fn sweep_errors() {
        let l = labels(&[0, 1]);
        assert!(matches!(
            sweep_scores(&[], &labels(&[]), Protocol::PointWise),
            Err(Error::EmptyScores)
        ));
        assert!(sweep_scores(&[1.0], &l, Protocol::PointWise).is_err());
    }

    #[test]
    fn sweep_tie_goes_to_larger_threshold() {
        // thresholds 0.9 and 0.8 both detect the event without false alarms
        let l = labels(&[0, 1, 1]);
        let choice = sweep_scores(&[0.1, 0.9, 0.8], &l, Protocol::EventWise).unwrap();
        assert_eq!(choice.threshold, 0.9);
    }
}
