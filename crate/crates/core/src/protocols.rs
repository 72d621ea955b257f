//! Point-wise, point-adjust, composite and event-wise scoring.
//!
//! A predicted segment and a ground-truth event overlap when they share at
//! least one index. One predicted segment may detect several events, and a
//! segment that overlaps any event is never an event-level false positive.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_same_len, Error, Result};
use crate::metrics::{
    confusion_of, false_alarm_rate, precision_recall_f1, ratio, ConfusionCounts, LabelSeries,
    PredictionSeries, Scores,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Protocol {
    PointWise,
    PointAdjust,
    Composite,
    EventWise,
}

impl Protocol {
    pub const ALL: [Protocol; 4] = [
        Protocol::PointWise,
        Protocol::PointAdjust,
        Protocol::Composite,
        Protocol::EventWise,
    ];

    /// Point-adjust is kept only to demonstrate how it inflates scores.
    pub fn is_deprecated(self) -> bool {
        self == Protocol::PointAdjust
    }

    pub fn name(self) -> &'static str {
        match self {
            Protocol::PointWise => "point-wise",
            Protocol::PointAdjust => "point-adjust",
            Protocol::Composite => "composite",
            Protocol::EventWise => "event-wise",
        }
    }

    /// Scores `preds` against `labels` under this protocol.
    pub fn score(self, labels: &LabelSeries, preds: &PredictionSeries) -> Result<ProtocolReport> {
        match self {
            Protocol::PointWise => score_point_wise(labels, preds),
            Protocol::PointAdjust => score_point_adjust(labels, preds),
            Protocol::Composite => score_composite(labels, preds),
            Protocol::EventWise => score_event_wise(labels, preds),
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Protocol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "point-wise" | "pw" | "pointwise" => Ok(Protocol::PointWise),
            "point-adjust" | "pa" | "pointadjust" => Ok(Protocol::PointAdjust),
            "composite" | "c" => Ok(Protocol::Composite),
            "event-wise" | "ew" | "eventwise" => Ok(Protocol::EventWise),
            other => Err(Error::InvalidConfig(format!("unknown protocol '{other}'"))),
        }
    }
}

/// Event-level counts: detected events, false predicted segments, missed events.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventCounts {
    pub tp_e: usize,
    pub fp_e: usize,
    pub fn_e: usize,
}

/// One protocol's scores at a single decision threshold.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProtocolReport {
    pub protocol: Protocol,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub far: f64,
    /// Point counts. For point-adjust these are the adjusted counts.
    pub counts: ConfusionCounts,
    /// Present for composite and event-wise.
    pub events: Option<EventCounts>,
}

impl ProtocolReport {
    fn new(
        protocol: Protocol,
        scores: Scores,
        far: f64,
        counts: ConfusionCounts,
        events: Option<EventCounts>,
    ) -> Self {
        ProtocolReport {
            protocol,
            precision: scores.precision,
            recall: scores.recall,
            f1: scores.f1,
            far,
            counts,
            events,
        }
    }

    pub fn deprecated(&self) -> bool {
        self.protocol.is_deprecated()
    }
}

/// Predictions after the point-adjust transformation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjustedPredictions {
    pub decisions: Vec<bool>,
}

impl AdjustedPredictions {
    pub fn into_predictions(self) -> PredictionSeries {
        PredictionSeries::new(self.decisions)
    }
}

/// Marks every ground-truth event containing at least one positive as fully positive.
pub fn point_adjust(labels: &LabelSeries, preds: &PredictionSeries) -> Result<AdjustedPredictions> {
    ensure_same_len(labels.len(), preds.len())?;
    let mut decisions = preds.decisions().to_vec();
    for event in labels.events() {
        let range = event.start..=event.end;
        if decisions[range.clone()].iter().any(|&d| d) {
            decisions[range].fill(true);
        }
    }
    Ok(AdjustedPredictions { decisions })
}

pub fn score_point_wise(labels: &LabelSeries, preds: &PredictionSeries) -> Result<ProtocolReport> {
    ensure_same_len(labels.len(), preds.len())?;
    let counts = confusion_of(labels.values(), preds.decisions());
    Ok(ProtocolReport::new(
        Protocol::PointWise,
        precision_recall_f1(&counts),
        false_alarm_rate(&counts),
        counts,
        None,
    ))
}

/// Point-wise scoring of the adjusted predictions. FP (and so FAR) is unchanged by the adjustment.
pub fn score_point_adjust(
    labels: &LabelSeries,
    preds: &PredictionSeries,
) -> Result<ProtocolReport> {
    let adjusted = point_adjust(labels, preds)?;
    let counts = confusion_of(labels.values(), &adjusted.decisions);
    Ok(ProtocolReport::new(
        Protocol::PointAdjust,
        precision_recall_f1(&counts),
        false_alarm_rate(&counts),
        counts,
        None,
    ))
}

/// Event-level recall with point-level precision over raw (unadjusted) counts.
pub fn score_composite(labels: &LabelSeries, preds: &PredictionSeries) -> Result<ProtocolReport> {
    ensure_same_len(labels.len(), preds.len())?;
    let counts = confusion_of(labels.values(), preds.decisions());
    let events = event_counts(labels, preds);
    let recall = event_recall(labels, &events);
    let precision = precision_recall_f1(&counts).precision;
    Ok(ProtocolReport::new(
        Protocol::Composite,
        Scores::new(precision, recall),
        false_alarm_rate(&counts),
        counts,
        Some(events),
    ))
}

/// Event-level recall with event-level precision penalised by `(1 - FAR)`.
pub fn score_event_wise(labels: &LabelSeries, preds: &PredictionSeries) -> Result<ProtocolReport> {
    ensure_same_len(labels.len(), preds.len())?;
    let counts = confusion_of(labels.values(), preds.decisions());
    let events = event_counts(labels, preds);
    let far = false_alarm_rate(&counts);
    let recall = event_recall(labels, &events);
    let precision = ratio(events.tp_e as f64, (events.tp_e + events.fp_e) as f64) * (1.0 - far);
    Ok(ProtocolReport::new(
        Protocol::EventWise,
        Scores::new(precision, recall),
        far,
        counts,
        Some(events),
    ))
}

fn event_recall(labels: &LabelSeries, events: &EventCounts) -> f64 {
    ratio(events.tp_e as f64, labels.events().len() as f64)
}

/// Overlap counts between ground-truth events and predicted segments. Lengths must match.
pub fn event_counts(labels: &LabelSeries, preds: &PredictionSeries) -> EventCounts {
    let decisions = preds.decisions();
    let truth = labels.values();
    let tp_e = labels
        .events()
        .iter()
        .filter(|e| decisions[e.start..=e.end].iter().any(|&d| d))
        .count();
    let fp_e = preds
        .segments()
        .iter()
        .filter(|s| !truth[s.start..=s.end].iter().any(|&l| l))
        .count();
    EventCounts {
        tp_e,
        fp_e,
        fn_e: labels.events().len() - tp_e,
    }
}

/// Scores every requested protocol on the same pair.
pub fn score_all(
    labels: &LabelSeries,
    preds: &PredictionSeries,
    protocols: &[Protocol],
) -> Result<Vec<ProtocolReport>> {
    protocols.iter().map(|p| p.score(labels, preds)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::{paint, Segment};
    use proptest::prelude::*;

    fn bits(v: &[u8]) -> Vec<bool> {
        v.iter().map(|&b| b == 1).collect()
    }

    fn worked_case() -> (LabelSeries, PredictionSeries) {
        (
            LabelSeries::new(bits(&[0, 0, 0, 1, 1, 1, 1, 1, 0, 0])),
            PredictionSeries::new(bits(&[0, 0, 0, 0, 0, 1, 0, 0, 0, 1])),
        )
    }

    fn event_wise_case() -> (LabelSeries, PredictionSeries) {
        let events = [
            Segment::new(10, 19),
            Segment::new(40, 49),
            Segment::new(70, 79),
        ];
        let segments = [
            Segment::new(12, 14),
            Segment::new(72, 75),
            Segment::new(0, 2),
            Segment::new(30, 31),
            Segment::new(55, 55),
        ];
        (
            LabelSeries::new(paint(&events, 100)),
            PredictionSeries::new(paint(&segments, 100)),
        )
    }

    fn positives(flags: &[bool]) -> Vec<usize> {
        flags
            .iter()
            .enumerate()
            .filter_map(|(i, &f)| f.then_some(i))
            .collect()
    }

    #[test]
    fn point_adjust_examples() {
        let (labels, preds) = worked_case();
        let adj = point_adjust(&labels, &preds).unwrap();
        assert_eq!(positives(&adj.decisions), vec![3, 4, 5, 6, 7, 9]);

        let silent = PredictionSeries::new(vec![false; 10]);
        assert!(positives(&point_adjust(&labels, &silent).unwrap().decisions).is_empty());

        let perfect = PredictionSeries::from(&labels);
        assert_eq!(
            point_adjust(&labels, &perfect).unwrap().decisions,
            labels.values()
        );
    }

    #[test]
    fn point_wise_examples() {
        let (labels, preds) = worked_case();
        let r = score_point_wise(&labels, &preds).unwrap();
        assert!((r.f1 - 0.285714).abs() < 1e-6);
        assert!(r.events.is_none());

        let r = score_point_wise(&labels, &PredictionSeries::from(&labels)).unwrap();
        assert_eq!(r.f1, 1.0);

        let all = PredictionSeries::new(vec![true; 10]);
        let r = score_point_wise(&labels, &all).unwrap();
        assert_eq!((r.precision, r.recall), (0.5, 1.0));
        assert!((r.f1 - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn point_adjust_scoring_examples() {
        let (labels, preds) = worked_case();
        let r = score_point_adjust(&labels, &preds).unwrap();
        assert_eq!((r.counts.tp, r.counts.fp, r.counts.fn_), (5, 1, 0));
        assert!((r.precision - 5.0 / 6.0).abs() < 1e-12);
        assert_eq!(r.recall, 1.0);
        assert!((r.f1 - 10.0 / 11.0).abs() < 1e-12);
        assert!(r.deprecated());

        // A = 50, one hit inside, 25 false positives (alpha = 26).
        let labels = LabelSeries::new(paint(&[Segment::new(100, 149)], 500));
        let mut flags = vec![false; 500];
        flags[120] = true;
        for i in 0..25 {
            flags[200 + 3 * i] = true;
        }
        let r = score_point_adjust(&labels, &PredictionSeries::new(flags)).unwrap();
        assert!((r.f1 - 0.8).abs() < 1e-12);

        let silent = PredictionSeries::new(vec![false; 500]);
        assert_eq!(score_point_adjust(&labels, &silent).unwrap().f1, 0.0);
    }

    #[test]
    fn composite_examples() {
        let (labels, preds) = worked_case();
        let r = score_composite(&labels, &preds).unwrap();
        assert_eq!(r.recall, 1.0);
        assert_eq!(r.precision, 0.5);
        assert!((r.f1 - 2.0 / 3.0).abs() < 1e-12);
        let ev = r.events.unwrap();
        assert_eq!((ev.tp_e, ev.fn_e), (1, 0));

        let r = score_composite(&labels, &PredictionSeries::from(&labels)).unwrap();
        assert_eq!(r.f1, 1.0);

        let silent = PredictionSeries::new(vec![false; 10]);
        assert_eq!(score_composite(&labels, &silent).unwrap().f1, 0.0);
    }

    #[test]
    fn event_wise_worked_example() {
        let (labels, preds) = event_wise_case();
        let r = score_event_wise(&labels, &preds).unwrap();
        let ev = r.events.unwrap();
        assert_eq!((ev.tp_e, ev.fp_e, ev.fn_e), (2, 3, 1));
        assert_eq!(r.counts.fp, 6);
        assert_eq!(r.counts.normal_count(), 70);
        assert!((r.far - 6.0 / 70.0).abs() < 1e-15);
        assert!((r.recall - 2.0 / 3.0).abs() < 1e-15);
        assert!((r.precision - 0.365714).abs() < 1e-6);
        assert!((r.f1 - 0.472325).abs() < 1e-6);
    }

    #[test]
    fn event_wise_all_positive_scores_zero() {
        let (labels, _) = event_wise_case();
        let all = PredictionSeries::new(vec![true; 100]);
        let r = score_event_wise(&labels, &all).unwrap();
        let ev = r.events.unwrap();
        assert_eq!((ev.tp_e, ev.fp_e), (3, 0));
        assert_eq!(r.far, 1.0);
        assert_eq!(r.precision, 0.0);
        assert_eq!(r.f1, 0.0);
    }

    #[test]
    fn event_wise_perfect() {
        let (labels, _) = event_wise_case();
        let r = score_event_wise(&labels, &PredictionSeries::from(&labels)).unwrap();
        assert_eq!(r.events.unwrap().fp_e, 0);
        assert_eq!((r.far, r.precision, r.recall, r.f1), (0.0, 1.0, 1.0, 1.0));
    }

    #[test]
    fn long_overlapping_segment_is_penalised_only_through_far() {
        // Detects all three events; the second segment spills over normal points.
        let (labels, _) = event_wise_case();
        let preds = PredictionSeries::new(paint(
            &[
                Segment::new(11, 15),
                Segment::new(35, 60),
                Segment::new(70, 72),
            ],
            100,
        ));
        let r = score_event_wise(&labels, &preds).unwrap();
        let ev = r.events.unwrap();
        assert_eq!((ev.tp_e, ev.fp_e), (3, 0));
        assert!(r.precision < 1.0 && r.far > 0.0);
    }

    #[test]
    fn one_segment_can_detect_several_events() {
        let (labels, _) = event_wise_case();
        let preds = PredictionSeries::new(paint(&[Segment::new(15, 45)], 100));
        let ev = score_event_wise(&labels, &preds).unwrap().events.unwrap();
        assert_eq!((ev.tp_e, ev.fp_e, ev.fn_e), (2, 0, 1));
    }

    #[test]
    fn series_without_normal_points() {
        let labels = LabelSeries::new(vec![true; 5]);
        let preds = PredictionSeries::new(vec![true; 5]);
        let r = score_event_wise(&labels, &preds).unwrap();
        assert_eq!(r.far, 0.0);
        assert_eq!(r.f1, 1.0);
    }

    #[test]
    fn length_mismatch_for_every_protocol() {
        let (labels, _) = worked_case();
        let preds = PredictionSeries::new(vec![false; 3]);
        for p in Protocol::ALL {
            assert!(matches!(
                p.score(&labels, &preds),
                Err(Error::LengthMismatch { .. })
            ));
        }
    }

    #[test]
    fn protocol_names_round_trip() {
        for p in Protocol::ALL {
            assert_eq!(p.name().parse::<Protocol>().unwrap(), p);
        }
        assert!("f1".parse::<Protocol>().is_err());
    }

    fn pair(max_len: usize) -> impl Strategy<Value = (Vec<bool>, Vec<bool>)> {
        (1..max_len).prop_flat_map(|n| {
            (
                prop::collection::vec(prop::bool::weighted(0.3), n),
                prop::collection::vec(prop::bool::weighted(0.1), n),
            )
        })
    }

    proptest! {
        #[test]
        fn adjustment_dominates_point_wise((l, p) in pair(300)) {
            let labels = LabelSeries::new(l);
            let preds = PredictionSeries::new(p);
            let pw = score_point_wise(&labels, &preds).unwrap();
            let pa = score_point_adjust(&labels, &preds).unwrap();
            prop_assert!(pa.f1 >= pw.f1);
            prop_assert!(pa.precision >= pw.precision);
            prop_assert!(pa.recall >= pw.recall);
            prop_assert_eq!(pa.counts.fp, pw.counts.fp);
        }

        #[test]
        fn adjustment_is_idempotent((l, p) in pair(300)) {
            let labels = LabelSeries::new(l);
            let preds = PredictionSeries::new(p.clone());
            let once = point_adjust(&labels, &preds).unwrap();
            let twice = point_adjust(&labels, &once.clone().into_predictions()).unwrap();
            prop_assert_eq!(&once, &twice);
            // originals stay positive, points outside events untouched
            for (i, (&orig, &adj)) in p.iter().zip(&once.decisions).enumerate() {
                if orig { prop_assert!(adj); }
                if !labels.values()[i] { prop_assert_eq!(orig, adj); }
            }
        }

        #[test]
        fn event_recall_agrees_and_counts_add_up((l, p) in pair(300)) {
            let labels = LabelSeries::new(l);
            let preds = PredictionSeries::new(p);
            let c = score_composite(&labels, &preds).unwrap();
            let e = score_event_wise(&labels, &preds).unwrap();
            prop_assert_eq!(c.recall, e.recall);
            for r in [&c, &e] {
                let ev = r.events.unwrap();
                prop_assert_eq!(ev.tp_e + ev.fn_e, labels.events().len());
                prop_assert!(ev.fp_e <= preds.segments().len());
                prop_assert!((r.f1 - crate::metrics::harmonic_f1(r.precision, r.recall)).abs() <= 1e-12);
            }
        }

        #[test]
        fn extra_hit_inside_detected_event((l, p) in pair(300), pick in any::<prop::sample::Index>()) {
            let labels = LabelSeries::new(l);
            let preds = PredictionSeries::new(p.clone());
            let detected: Vec<Segment> = labels.events().iter().copied()
                .filter(|e| p[e.start..=e.end].iter().any(|&d| d)).collect();
            prop_assume!(!detected.is_empty());
            let event = detected[pick.index(detected.len())];
            // keep the new point from bridging into a segment outside the event
            let before = event.start.checked_sub(1).is_some_and(|i| p[i]);
            let after = p.get(event.end + 1).copied().unwrap_or(false);
            let candidates: Vec<usize> = (event.start..=event.end)
                .filter(|&i| !(i == event.start && before) && !(i == event.end && after))
                .collect();
            prop_assume!(!candidates.is_empty());
            let idx = candidates[pick.index(candidates.len())];
            let mut q = p.clone();
            q[idx] = true;
            let more = PredictionSeries::new(q);
            let c0 = score_composite(&labels, &preds).unwrap();
            let c1 = score_composite(&labels, &more).unwrap();
            prop_assert_eq!(c0.recall, c1.recall);
            prop_assert_eq!(c0.counts.fp, c1.counts.fp);
            let e0 = score_event_wise(&labels, &preds).unwrap();
            let e1 = score_event_wise(&labels, &more).unwrap();
            prop_assert_eq!(e0.f1, e1.f1);
            let pa0 = score_point_adjust(&labels, &preds).unwrap();
            let pa1 = score_point_adjust(&labels, &more).unwrap();
            prop_assert!(pa1.f1 >= pa0.f1);
        }

        #[test]
        fn perfect_and_silent_detectors(l in prop::collection::vec(any::<bool>(), 1..300)) {
            let labels = LabelSeries::new(l);
            prop_assume!(labels.anomalous_count() > 0);
            let perfect = PredictionSeries::from(&labels);
            let silent = PredictionSeries::new(vec![false; labels.len()]);
            for proto in Protocol::ALL {
                prop_assert_eq!(proto.score(&labels, &perfect).unwrap().f1, 1.0);
                prop_assert_eq!(proto.score(&labels, &silent).unwrap().f1, 0.0);
            }
        }
    }
}
