//! ROC sweeps: detection probability vs false-alarm rate under a sliding
//! threshold.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::components::label_components;
use crate::error::{Error, Result};
use crate::imgproc::{BinaryMask, GrayImage};

/// One operating point of the sweep.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct RocPoint {
    pub threshold: f64,
    /// Detected targets over total targets, pooled over the batch.
    pub pd: f64,
    /// False-positive pixels over total pixels, pooled over the batch.
    pub fa: f64,
}

/// Sweep descending thresholds over a batch of saliency maps.
///
/// A ground-truth target is one 8-connected component of its mask; it counts
/// as detected at a threshold when at least one predicted pixel falls inside
/// the component. False-alarm pixels are predictions outside every component.
pub fn roc_sweep(
    saliency: &[GrayImage],
    gt: &[BinaryMask],
    thresholds: &[f64],
) -> Result<Vec<RocPoint>> {
    if saliency.is_empty() || saliency.len() != gt.len() {
        return Err(Error::invalid(
            "saliency and ground-truth batches must be nonempty and equal-length",
        ));
    }
    for (s, g) in saliency.iter().zip(gt) {
        if s.height() != g.height() || s.width() != g.width() {
            return Err(Error::invalid("saliency/mask dimension mismatch"));
        }
    }
    if thresholds.windows(2).any(|w| w[1] >= w[0]) || thresholds.is_empty() {
        return Err(Error::invalid("thresholds must be strictly descending"));
    }

    let labeled: Vec<_> = gt.iter().map(label_components).collect();
    let total_targets: usize = labeled.iter().map(|l| l.count).sum();
    if total_targets == 0 {
        return Err(Error::invalid("no ground-truth targets in batch"));
    }
    let total_pixels: usize = gt.iter().map(|g| g.height() * g.width()).sum();

    let points: Vec<RocPoint> = thresholds
        .par_iter()
        .map(|&t| {
            let mut detected = 0usize;
            let mut false_pixels = 0usize;
            for (img, labels) in saliency.iter().zip(&labeled) {
                let mut hit = vec![false; labels.count];
                for y in 0..img.height() {
                    for x in 0..img.width() {
                        if img.get(y, x) > t {
                            match labels.get(y, x) {
                                Some(id) => hit[id as usize] = true,
                                None => false_pixels += 1,
                            }
                        }
                    }
                }
                detected += hit.iter().filter(|&&h| h).count();
            }
            RocPoint {
                threshold: t,
                pd: detected as f64 / total_targets as f64,
                fa: false_pixels as f64 / total_pixels as f64,
            }
        })
        .collect();
    Ok(points)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spot_batch() -> (Vec<GrayImage>, Vec<BinaryMask>) {
        // Saliency falls off with distance from the target; gt is a 3x3 block.
        let gt = BinaryMask::from_fn(16, 16, |y, x| (7..10).contains(&y) && (7..10).contains(&x));
        let map = GrayImage::from_fn(16, 16, |y, x| {
            let d = ((y as f64 - 8.0).powi(2) + (x as f64 - 8.0).powi(2)).sqrt();
            (10.0 - d).max(0.0)
        });
        (vec![map], vec![gt])
    }

    #[test]
    fn low_threshold_detects_everything() {
        let (maps, gts) = spot_batch();
        let pts = roc_sweep(&maps, &gts, &[-1.0]).unwrap();
        assert_eq!(pts[0].pd, 1.0);
        let gt_area = 9.0;
        let area = 256.0;
        assert!((pts[0].fa - (area - gt_area) / area).abs() < 1e-12);
    }

    #[test]
    fn high_threshold_detects_nothing() {
        let (maps, gts) = spot_batch();
        let pts = roc_sweep(&maps, &gts, &[1e9]).unwrap();
        assert_eq!(pts[0].pd, 0.0);
        assert_eq!(pts[0].fa, 0.0);
    }

    #[test]
    fn sweep_is_monotone_as_threshold_descends() {
        let (maps, gts) = spot_batch();
        let thresholds: Vec<f64> = (0..20).map(|i| 10.0 - i as f64 * 0.6).collect();
        let pts = roc_sweep(&maps, &gts, &thresholds).unwrap();
        for w in pts.windows(2) {
            assert!(w[1].pd >= w[0].pd);
            assert!(w[1].fa >= w[0].fa);
        }
        for p in &pts {
            assert!((0.0..=1.0).contains(&p.pd));
            assert!((0.0..=1.0).contains(&p.fa));
        }
    }

    #[test]
    fn batch_without_targets_is_rejected() {
        let maps = vec![GrayImage::zeros(8, 8)];
        let gts = vec![BinaryMask::empty(8, 8)];
        assert!(roc_sweep(&maps, &gts, &[0.5]).is_err());
    }

    #[test]
    fn non_descending_thresholds_rejected() {
        let (maps, gts) = spot_batch();
        assert!(roc_sweep(&maps, &gts, &[1.0, 1.0]).is_err());
        assert!(roc_sweep(&maps, &gts, &[1.0, 2.0]).is_err());
        assert!(roc_sweep(&maps, &gts, &[]).is_err());
    }
}
