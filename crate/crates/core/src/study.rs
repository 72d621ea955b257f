//! F1 of hypothetical detectors with fixed recall and false alarm rate
//! across datasets that differ only in contamination.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::metrics::{scores_from_counts, Scores};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorSpec {
    pub recall: f64,
    pub far: f64,
}

impl DetectorSpec {
    pub fn new(recall: f64, far: f64) -> Result<Self> {
        for (name, v) in [("recall", recall), ("far", far)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidConfig(format!(
                    "{name} must lie in [0, 1], got {v}"
                )));
            }
        }
        Ok(DetectorSpec { recall, far })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetShape {
    pub n_normal: usize,
    pub n_anomalous: usize,
}

impl DatasetShape {
    pub fn new(n_normal: usize, n_anomalous: usize) -> Result<Self> {
        if n_normal == 0 && n_anomalous == 0 {
            return Err(Error::InvalidConfig("dataset shape cannot be empty".into()));
        }
        Ok(DatasetShape {
            n_normal,
            n_anomalous,
        })
    }

    pub fn contamination(&self) -> f64 {
        self.n_anomalous as f64 / (self.n_normal + self.n_anomalous) as f64
    }
}

/// P, R, F1 from expected (fractional) confusion counts.
pub fn expected_f1(spec: DetectorSpec, shape: DatasetShape) -> Scores {
    let anomalous = shape.n_anomalous as f64;
    let tp = spec.recall * anomalous;
    let fp = spec.far * shape.n_normal as f64;
    let fn_ = (1.0 - spec.recall) * anomalous;
    scores_from_counts(tp, fp, fn_)
}

/// `n` points spaced logarithmically over `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let (a, b) = (lo.ln(), hi.ln());
            (0..n)
                .map(|i| {
                    if i == 0 {
                        lo
                    } else if i == n - 1 {
                        hi
                    } else {
                        (a + (b - a) * i as f64 / (n - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}

/// The default FAR grid: 50 log-spaced values over `[0.001, 0.2]`.
pub fn default_far_grid() -> Vec<f64> {
    log_grid(0.001, 0.2, 50)
}

/// 10000 normal points with 5000, 1000 and 100 anomalous points.
pub fn default_shapes() -> Vec<DatasetShape> {
    [5000, 1000, 100]
        .into_iter()
        .map(|n_anomalous| DatasetShape {
            n_normal: 10_000,
            n_anomalous,
        })
        .collect()
}

/// F1 per FAR (rows) and dataset shape (columns).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fig4Table {
    pub recall: f64,
    pub fars: Vec<f64>,
    pub shapes: Vec<DatasetShape>,
    pub f1: Vec<Vec<f64>>,
}

impl Fig4Table {
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let mut header = vec!["far".to_string()];
        header.extend(
            self.shapes
                .iter()
                .map(|s| format!("f1_n{}_a{}", s.n_normal, s.n_anomalous)),
        );
        w.write_record(&header)?;
        for (far, row) in self.fars.iter().zip(&self.f1) {
            let mut record = vec![far.to_string()];
            record.extend(row.iter().map(f64::to_string));
            w.write_record(&record)?;
        }
        w.flush()?;
        Ok(())
    }
}

pub fn fig4_table(recall: f64, fars: &[f64], shapes: &[DatasetShape]) -> Result<Fig4Table> {
    let f1 = fars
        .iter()
        .map(|&far| {
            let spec = DetectorSpec::new(recall, far)?;
            Ok(shapes
                .iter()
                .map(|&shape| expected_f1(spec, shape).f1)
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(Fig4Table {
        recall,
        fars: fars.to_vec(),
        shapes: shapes.to_vec(),
        f1,
    })
}
