use std::fs::File;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{ensure_same_len, Error, Result};
use crate::metrics::{segmentize, LabelSeries, Segment};

/// An event boundary pair from an event file, `end` inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventSpec {
    pub start: usize,
    pub end: usize,
}

#[derive(Debug, Deserialize)]
struct EventRow {
    start: i64,
    end: i64,
}

pub fn load_events(path: impl AsRef<Path>, end_exclusive: bool) -> Result<Vec<EventSpec>> {
    read_events(File::open(path)?, end_exclusive)
}

/// Reads a `start,end` CSV. With `end_exclusive`, `end` is shifted down by one.
pub fn read_events<R: Read>(reader: R, end_exclusive: bool) -> Result<Vec<EventSpec>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut events = Vec::new();
    for (i, row) in rdr.deserialize::<EventRow>().enumerate() {
        let line = i + 2;
        let row = row.map_err(|e| Error::Ingestion {
            row: line,
            message: e.to_string(),
        })?;
        let end = if end_exclusive { row.end - 1 } else { row.end };
        if row.start < 0 || end < row.start {
            return Err(Error::Ingestion {
                row: line,
                message: format!("invalid event bounds start={} end={}", row.start, row.end),
            });
        }
        events.push(EventSpec {
            start: row.start as usize,
            end: end as usize,
        });
    }
    Ok(events)
}

/// Paints the union of the event ranges over `len` points.
pub fn labels_from_events(events: &[EventSpec], len: usize) -> Result<LabelSeries> {
    let mut values = vec![false; len];
    for e in events {
        if e.start > e.end || e.end >= len {
            return Err(Error::EventOutOfRange {
                start: e.start,
                end: e.end,
                len,
            });
        }
        values[e.start..=e.end].fill(true);
    }
    Ok(LabelSeries::new(values))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiffDirection {
    /// Anomalous in the integrated column only.
    IntegratedOnly,
    /// Anomalous in the event-file reconstruction only.
    ReconstructedOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffRun {
    pub segment: Segment,
    pub direction: DiffDirection,
}

/// Disagreement inside one event of either labeling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EventDiff {
    pub event: Segment,
    /// Which labeling the event belongs to.
    pub from_integrated: bool,
    pub disagreeing_points: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelDiff {
    pub runs: Vec<DiffRun>,
    pub integrated_only: usize,
    pub reconstructed_only: usize,
    pub per_event: Vec<EventDiff>,
}

impl LabelDiff {
    pub fn is_empty(&self) -> bool {
        self.runs.is_empty()
    }
}

pub fn check_label_consistency(
    integrated: &LabelSeries,
    reconstructed: &LabelSeries,
) -> Result<LabelDiff> {
    ensure_same_len(integrated.len(), reconstructed.len())?;
    let a = integrated.values();
    let b = reconstructed.values();
    let only_a: Vec<bool> = a.iter().zip(b).map(|(&x, &y)| x && !y).collect();
    let only_b: Vec<bool> = a.iter().zip(b).map(|(&x, &y)| !x && y).collect();

    let mut runs: Vec<DiffRun> = segmentize(&only_a)
        .into_iter()
        .map(|segment| DiffRun {
            segment,
            direction: DiffDirection::IntegratedOnly,
        })
        .chain(segmentize(&only_b).into_iter().map(|segment| DiffRun {
            segment,
            direction: DiffDirection::ReconstructedOnly,
        }))
        .collect();
    runs.sort_by_key(|r| r.segment.start);

    let disagree = |e: &Segment| (e.start..=e.end).filter(|&i| a[i] != b[i]).count();
    let per_event = integrated
        .events()
        .iter()
        .map(|e| (e, true))
        .chain(reconstructed.events().iter().map(|e| (e, false)))
        .filter_map(|(e, from_integrated)| {
            let n = disagree(e);
            (n > 0).then_some(EventDiff {
                event: *e,
                from_integrated,
                disagreeing_points: n,
            })
        })
        .collect();

    Ok(LabelDiff {
        runs,
        integrated_only: only_a.iter().filter(|&&x| x).count(),
        reconstructed_only: only_b.iter().filter(|&&x| x).count(),
        per_event,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn bits(v: &[u8]) -> Vec<bool> {
        v.iter().map(|&b| b == 1).collect()
    }

    #[test]
    fn events_to_labels() {
        let l = labels_from_events(&[EventSpec { start: 3, end: 7 }], 10).unwrap();
        assert_eq!(l.values(), bits(&[0, 0, 0, 1, 1, 1, 1, 1, 0, 0]).as_slice());

        let l = labels_from_events(
            &[
                EventSpec { start: 2, end: 5 },
                EventSpec { start: 4, end: 8 },
            ],
            12,
        )
        .unwrap();
        assert_eq!(l.events(), &[Segment::new(2, 8)]);

        let l = labels_from_events(&[], 5).unwrap();
        assert_eq!(l.anomalous_count(), 0);

        assert!(matches!(
            labels_from_events(&[EventSpec { start: 3, end: 10 }], 10),
            Err(Error::EventOutOfRange { .. })
        ));
    }

    #[test]
    fn event_file_parsing() {
        let text = "start,end\n3,7\n10, 12\n";
        let inclusive = read_events(text.as_bytes(), false).unwrap();
        assert_eq!(inclusive[1], EventSpec { start: 10, end: 12 });
        let exclusive = read_events(text.as_bytes(), true).unwrap();
        assert_eq!(exclusive[0], EventSpec { start: 3, end: 6 });
        assert!(read_events("start,end\n5,2\n".as_bytes(), false).is_err());
        assert!(read_events("start,end\n5,5\n".as_bytes(), true).is_err());
        assert!(read_events("start,end\na,2\n".as_bytes(), false).is_err());
    }

    #[test]
    fn identical_labels_are_consistent() {
        let l = LabelSeries::new(bits(&[0, 1, 1, 0, 1]));
        assert!(check_label_consistency(&l, &l).unwrap().is_empty());
    }

    #[test]
    fn extra_integrated_positive() {
        let rec = LabelSeries::new(bits(&[0, 0, 0, 1, 1, 1, 1, 1, 0, 0]));
        let int = LabelSeries::new(bits(&[0, 0, 0, 1, 1, 1, 1, 1, 0, 1]));
        let d = check_label_consistency(&int, &rec).unwrap();
        assert_eq!(
            d.runs,
            vec![DiffRun {
                segment: Segment::new(9, 9),
                direction: DiffDirection::IntegratedOnly
            }]
        );
        assert_eq!((d.integrated_only, d.reconstructed_only), (1, 0));
        assert_eq!(d.per_event.len(), 1);
        assert!(d.per_event[0].from_integrated);
    }

    #[test]
    fn disjoint_equal_cardinality() {
        let int = LabelSeries::new(bits(&[1, 1, 1, 0, 0, 0, 0, 1, 1, 0, 0, 0]));
        let rec = LabelSeries::new(bits(&[0, 0, 0, 1, 1, 0, 0, 0, 0, 1, 1, 1]));
        let d = check_label_consistency(&int, &rec).unwrap();
        assert_eq!(d.integrated_only, 5);
        assert_eq!(d.reconstructed_only, 5);
        assert_eq!(d.runs.len(), 4);
        assert!(d
            .runs
            .windows(2)
            .all(|w| w[0].segment.start < w[1].segment.start));
        let short = LabelSeries::new(vec![false; 11]);
        assert!(check_label_consistency(&int, &short).is_err());
    }

    proptest! {
        #[test]
        fn events_round_trip(flags in prop::collection::vec(any::<bool>(), 0..300)) {
            let labels = LabelSeries::new(flags);
            let specs: Vec<EventSpec> = labels.events().iter()
                .map(|s| EventSpec { start: s.start, end: s.end }).collect();
            prop_assert_eq!(labels_from_events(&specs, labels.len()).unwrap(), labels.clone());
            prop_assert!(check_label_consistency(&labels, &labels).unwrap().is_empty());
        }
    }
}
