//! Evaluation protocols for time-series anomaly detection.
//!
//! * [`metrics`]: binary series, segmentation, point-level P/R/F1/FAR.
//! * [`protocols`]: point-wise, point-adjust, composite and event-wise scoring.
//! * [`adversary`]: the random-guess attack on point-adjust, its closed-form
//!   outcome distributions and a Monte Carlo check of them.
//! * [`study`]: F1 versus contamination for detectors of fixed recall and FAR.
//! * [`pca`]: PCA reconstruction-error baseline and threshold sweep.
//! * [`data`]: CSV ingestion, event files, label consistency, synthetic data.

pub mod adversary;
pub mod data;
pub mod error;
pub mod metrics;
pub mod pca;
pub mod protocols;
pub mod study;

pub use error::{Error, Result};
pub use metrics::{ConfusionCounts, LabelSeries, PredictionSeries, Scores, Segment};
pub use protocols::{EventCounts, Protocol, ProtocolReport};
