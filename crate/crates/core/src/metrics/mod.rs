//! Segmentation and detection metrics: IoU, per-sample-normalized IoU, and
//! ROC sweeps over sliding thresholds.

mod components;
mod roc;

pub use components::{label_components, split_components, ComponentLabels};
pub use roc::{roc_sweep, RocPoint};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::imgproc::BinaryMask;

/// Pixel tallies for one prediction/ground-truth pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleCounts {
    /// True-positive pixels.
    pub tp: usize,
    /// Ground-truth positive pixels.
    pub t: usize,
    /// Predicted positive pixels.
    pub p: usize,
}

impl SampleCounts {
    /// Per-sample intersection over union; target-free, prediction-free
    /// samples score `empty_value`.
    fn ratio(&self, empty_value: f64) -> f64 {
        let denom = self.t + self.p - self.tp;
        if denom == 0 {
            empty_value
        } else {
            self.tp as f64 / denom as f64
        }
    }
}

/// Tally pixelwise counts for one sample.
pub fn sample_counts(pred: &BinaryMask, gt: &BinaryMask) -> Result<SampleCounts> {
    if pred.height() != gt.height() || pred.width() != gt.width() {
        return Err(Error::invalid(format!(
            "prediction {}x{} does not match ground truth {}x{}",
            pred.height(),
            pred.width(),
            gt.height(),
            gt.width()
        )));
    }
    let mut counts = SampleCounts { tp: 0, t: 0, p: 0 };
    for (a, b) in pred.data().iter().zip(gt.data()) {
        counts.p += *a as usize;
        counts.t += *b as usize;
        counts.tp += (*a && *b) as usize;
    }
    Ok(counts)
}

/// Aggregate IoU: pooled counts over the whole batch.
pub fn iou(batch: &[SampleCounts]) -> Result<f64> {
    if batch.is_empty() {
        return Err(Error::invalid("empty batch"));
    }
    let tp: usize = batch.iter().map(|c| c.tp).sum();
    let denom: usize = batch.iter().map(|c| c.t + c.p - c.tp).sum();
    if denom == 0 {
        // Nothing annotated and nothing predicted anywhere: perfect rejection.
        return Ok(1.0);
    }
    Ok(tp as f64 / denom as f64)
}

/// Per-sample-averaged IoU. Samples with no ground truth and no prediction
/// count as perfect rejection (1.0).
pub fn niou(batch: &[SampleCounts]) -> Result<f64> {
    niou_with_empty_value(batch, 1.0)
}

/// Per-sample-averaged IoU with an explicit score for samples where both the
/// ground truth and the prediction are empty.
pub fn niou_with_empty_value(batch: &[SampleCounts], empty_value: f64) -> Result<f64> {
    if batch.is_empty() {
        return Err(Error::invalid("empty batch"));
    }
    let sum: f64 = batch.iter().map(|c| c.ratio(empty_value)).sum();
    Ok(sum / batch.len() as f64)
}
