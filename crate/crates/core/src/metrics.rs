//! Binary series, segmentation and the point-level P/R/F1/FAR formulas.
//!
//! Indices are 0-based and segments are inclusive on both ends.

use serde::{Deserialize, Serialize};

use crate::error::{ensure_same_len, Error, Result};

/// A contiguous run of indices, `start..=end`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Segment {
    pub start: usize,
    pub end: usize,
}

impl Segment {
    pub fn new(start: usize, end: usize) -> Self {
        debug_assert!(start <= end, "segment start {start} > end {end}");
        Segment { start, end }
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.end - self.start + 1
    }

    pub fn contains(&self, index: usize) -> bool {
        self.start <= index && index <= self.end
    }

    /// True when the two segments share at least one index.
    pub fn overlaps(&self, other: &Segment) -> bool {
        self.start <= other.end && other.start <= self.end
    }
}

/// Maximal runs of `true`, in order.
pub fn segmentize(flags: &[bool]) -> Vec<Segment> {
    let mut runs = Vec::new();
    let mut open: Option<usize> = None;
    for (i, &flag) in flags.iter().enumerate() {
        match (flag, open) {
            (true, None) => open = Some(i),
            (false, Some(start)) => {
                runs.push(Segment::new(start, i - 1));
                open = None;
            }
            _ => {}
        }
    }
    if let Some(start) = open {
        runs.push(Segment::new(start, flags.len() - 1));
    }
    runs
}

/// Inverse of [`segmentize`]: paints `segments` onto an all-false series of length `len`.
pub fn paint(segments: &[Segment], len: usize) -> Vec<bool> {
    let mut flags = vec![false; len];
    for seg in segments {
        flags[seg.start..=seg.end].fill(true);
    }
    flags
}

/// Parses numeric cells as flags, rejecting anything other than exactly 0 or 1.
pub fn flags_from_values(values: &[f64]) -> Result<Vec<bool>> {
    values
        .iter()
        .enumerate()
        .map(|(index, &value)| {
            if value == 0.0 {
                Ok(false)
            } else if value == 1.0 {
                Ok(true)
            } else {
                Err(Error::InvalidFlag { index, value })
            }
        })
        .collect()
}

/// Ground-truth labels plus their anomalous events.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelSeries {
    values: Vec<bool>,
    events: Vec<Segment>,
}

impl LabelSeries {
    pub fn new(values: Vec<bool>) -> Self {
        let events = segmentize(&values);
        LabelSeries { values, events }
    }

    pub fn from_values(values: &[f64]) -> Result<Self> {
        Ok(Self::new(flags_from_values(values)?))
    }

    pub fn values(&self) -> &[bool] {
        &self.values
    }

    pub fn events(&self) -> &[Segment] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn anomalous_count(&self) -> usize {
        self.events.iter().map(Segment::len).sum()
    }

    pub fn normal_count(&self) -> usize {
        self.len() - self.anomalous_count()
    }

    /// Fraction of anomalous points; 0 for an empty series.
    pub fn contamination_rate(&self) -> f64 {
        ratio(self.anomalous_count() as f64, self.len() as f64)
    }
}

/// Binary detector output plus its predicted segments.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PredictionSeries {
    decisions: Vec<bool>,
    segments: Vec<Segment>,
}

impl PredictionSeries {
    pub fn new(decisions: Vec<bool>) -> Self {
        let segments = segmentize(&decisions);
        PredictionSeries {
            decisions,
            segments,
        }
    }

    pub fn from_values(values: &[f64]) -> Result<Self> {
        Ok(Self::new(flags_from_values(values)?))
    }

    /// Thresholds real-valued scores: a point is positive when `score >= threshold`.
    pub fn from_scores(scores: &[f64], threshold: f64) -> Self {
        Self::new(scores.iter().map(|&s| s >= threshold).collect())
    }

    pub fn decisions(&self) -> &[bool] {
        &self.decisions
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn len(&self) -> usize {
        self.decisions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.decisions.is_empty()
    }

    pub fn positive_count(&self) -> usize {
        self.segments.iter().map(Segment::len).sum()
    }
}

impl From<&LabelSeries> for PredictionSeries {
    fn from(labels: &LabelSeries) -> Self {
        PredictionSeries {
            decisions: labels.values.clone(),
            segments: labels.events.clone(),
        }
    }
}

/// Point-level confusion counts.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
}

impl ConfusionCounts {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn normal_count(&self) -> usize {
        self.fp + self.tn
    }
}

/// Precision, recall and their harmonic mean.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Scores {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

impl Scores {
    pub fn new(precision: f64, recall: f64) -> Self {
        Scores {
            precision,
            recall,
            f1: harmonic_f1(precision, recall),
        }
    }
}

/// `num / den`, or 0 when `den` is 0.
pub(crate) fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        0.0
    } else {
        num / den
    }
}

/// `2PR / (P + R)`, 0 when both are 0.
pub fn harmonic_f1(precision: f64, recall: f64) -> f64 {
    ratio(2.0 * precision * recall, precision + recall)
}

pub fn point_confusion(labels: &LabelSeries, preds: &PredictionSeries) -> Result<ConfusionCounts> {
    ensure_same_len(labels.len(), preds.len())?;
    Ok(confusion_of(labels.values(), preds.decisions()))
}

pub(crate) fn confusion_of(labels: &[bool], preds: &[bool]) -> ConfusionCounts {
    let mut c = ConfusionCounts::default();
    for (&l, &p) in labels.iter().zip(preds) {
        match (l, p) {
            (true, true) => c.tp += 1,
            (false, true) => c.fp += 1,
            (true, false) => c.fn_ += 1,
            (false, false) => c.tn += 1,
        }
    }
    c
}

/// P, R and F1 from integer counts. Every zero denominator yields 0.
pub fn precision_recall_f1(c: &ConfusionCounts) -> Scores {
    scores_from_counts(c.tp as f64, c.fp as f64, c.fn_ as f64)
}

/// Same formulas as [`precision_recall_f1`] over real-valued (expected) counts.
pub fn scores_from_counts(tp: f64, fp: f64, fn_: f64) -> Scores {
    Scores::new(ratio(tp, tp + fp), ratio(tp, tp + fn_))
}

/// `fp / (fp + tn)`. A series with no normal points has FAR 0 and logs a warning.
pub fn false_alarm_rate(c: &ConfusionCounts) -> f64 {
    let normal = c.normal_count();
    if normal == 0 {
        log::warn!("false alarm rate requested on a series without normal points; using 0");
        return 0.0;
    }
    c.fp as f64 / normal as f64
}
