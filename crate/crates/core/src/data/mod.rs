//! Dataset ingestion and export.
//!
//! Frames are CSV with a header row naming the channels and an optional final
//! `label` column holding 0/1.

mod labels;
mod synthetic;

use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

pub use labels::{
    check_label_consistency, labels_from_events, load_events, read_events, DiffDirection, DiffRun,
    EventDiff, EventSpec, LabelDiff,
};
pub use synthetic::{
    generate_synthetic, generate_training, place_events, AnomalySignal, SyntheticSpec,
};

use crate::error::{Error, Result};
use crate::metrics::LabelSeries;

pub const LABEL_COLUMN: &str = "label";

/// `T` rows by `D` channels of real values, row-major, plus optional labels.
#[derive(Debug, Clone, PartialEq)]
pub struct MvtsFrame {
    channel_names: Vec<String>,
    values: Vec<f64>,
    rows: usize,
    labels: Option<LabelSeries>,
}

impl MvtsFrame {
    pub fn new(
        channel_names: Vec<String>,
        values: Vec<f64>,
        labels: Option<LabelSeries>,
    ) -> Result<Self> {
        let channels = channel_names.len();
        if channels == 0 {
            return Err(Error::InvalidConfig(
                "a frame needs at least one channel".into(),
            ));
        }
        if !values.len().is_multiple_of(channels) {
            return Err(Error::InvalidConfig(format!(
                "{} values do not fill rows of {channels} channels",
                values.len()
            )));
        }
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Ingestion {
                row: i / channels + 1,
                message: "non-finite value".into(),
            });
        }
        let rows = values.len() / channels;
        if let Some(l) = &labels {
            if l.len() != rows {
                return Err(Error::LengthMismatch {
                    labels: l.len(),
                    predictions: rows,
                });
            }
        }
        Ok(MvtsFrame {
            channel_names,
            values,
            rows,
            labels,
        })
    }

    /// Channels named `c0..c{D-1}`.
    pub fn from_rows(rows: &[Vec<f64>], labels: Option<LabelSeries>) -> Result<Self> {
        let channels = rows.first().map_or(0, Vec::len);
        if let Some(i) = rows.iter().position(|r| r.len() != channels) {
            return Err(Error::Ingestion {
                row: i + 1,
                message: format!("expected {channels} values, found {}", rows[i].len()),
            });
        }
        Self::new(default_channel_names(channels), rows.concat(), labels)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn channels(&self) -> usize {
        self.channel_names.len()
    }

    pub fn channel_names(&self) -> &[String] {
        &self.channel_names
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let d = self.channels();
        &self.values[i * d..(i + 1) * d]
    }

    pub fn iter_rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.channels())
    }

    pub fn column(&self, c: usize) -> Vec<f64> {
        self.iter_rows().map(|r| r[c]).collect()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn labels(&self) -> Option<&LabelSeries> {
        self.labels.as_ref()
    }

    pub fn with_labels(mut self, labels: Option<LabelSeries>) -> Result<Self> {
        if let Some(l) = &labels {
            if l.len() != self.rows {
                return Err(Error::LengthMismatch {
                    labels: l.len(),
                    predictions: self.rows,
                });
            }
        }
        self.labels = labels;
        Ok(self)
    }

    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = self.channel_names.clone();
        if self.labels.is_some() {
            header.push(LABEL_COLUMN.to_string());
        }
        w.write_record(&header)?;
        for (i, row) in self.iter_rows().enumerate() {
            let mut record: Vec<String> = row.iter().map(f64::to_string).collect();
            if let Some(l) = &self.labels {
                record.push(if l.values()[i] { "1" } else { "0" }.to_string());
            }
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub(crate) fn default_channel_names(channels: usize) -> Vec<String> {
    (0..channels).map(|c| format!("c{c}")).collect()
}

pub fn load_frame(path: impl AsRef<Path>) -> Result<MvtsFrame> {
    read_frame(File::open(path)?)
}

/// Reads a frame; errors name the offending line (the header is line 1).
pub fn read_frame<R: Read>(reader: R) -> Result<MvtsFrame> {
    let mut rdr = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut names: Vec<String> = rdr.headers()?.iter().map(str::to_string).collect();
    let has_labels = names.last().is_some_and(|n| n == LABEL_COLUMN);
    if has_labels {
        names.pop();
    }
    if names.is_empty() {
        return Err(Error::Ingestion {
            row: 1,
            message: "header names no channels".into(),
        });
    }
    let width = names.len() + usize::from(has_labels);
    let mut values = Vec::new();
    let mut label_values = Vec::new();
    for record in rdr.records() {
        let record = record?;
        let row = record.position().map_or(0, |p| p.line() as usize);
        if record.len() != width {
            return Err(Error::Ingestion {
                row,
                message: format!("expected {width} fields, found {}", record.len()),
            });
        }
        for (c, cell) in record.iter().enumerate() {
            let v: f64 = cell.parse().map_err(|_| Error::Ingestion {
                row,
                message: format!("non-numeric cell '{cell}' in column {}", c + 1),
            })?;
            if has_labels && c == width - 1 {
                if v != 0.0 && v != 1.0 {
                    return Err(Error::Ingestion {
                        row,
                        message: format!("label must be 0 or 1, found '{cell}'"),
                    });
                }
                label_values.push(v == 1.0);
            } else {
                if !v.is_finite() {
                    return Err(Error::Ingestion {
                        row,
                        message: format!("non-finite cell '{cell}' in column {}", c + 1),
                    });
                }
                values.push(v);
            }
        }
    }
    let labels = has_labels.then(|| LabelSeries::new(label_values));
    MvtsFrame::new(names, values, labels)
}

/// Reads one numeric column by name. A single-column file is read whatever its header.
pub fn read_column<R: Read>(reader: R, name: &str) -> Result<Vec<f64>> {
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = rdr.headers()?.clone();
    let idx = match headers.iter().position(|h| h == name) {
        Some(i) => i,
        None if headers.len() == 1 => 0,
        None => {
            return Err(Error::Ingestion {
                row: 1,
                message: format!("no '{name}' column in header"),
            })
        }
    };
    rdr.records()
        .map(|record| {
            let record = record?;
            let row = record.position().map_or(0, |p| p.line() as usize);
            let cell = record.get(idx).unwrap_or("");
            cell.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| Error::Ingestion {
                    row,
                    message: format!("non-numeric cell '{cell}' in column '{name}'"),
                })
        })
        .collect()
}

pub fn load_column(path: impl AsRef<Path>, name: &str) -> Result<Vec<f64>> {
    read_column(File::open(path)?, name)
}

/// Labels from a CSV `label` column (or a single-column file).
pub fn load_labels(path: impl AsRef<Path>) -> Result<LabelSeries> {
    LabelSeries::from_values(&load_column(path, LABEL_COLUMN)?)
}
