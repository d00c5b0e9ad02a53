//! Adaptive mean/sigma segmentation of saliency maps.

use super::{BinaryMask, GrayImage};
use crate::error::{Error, Result};

/// Threshold a saliency map at `t = max(v_min, mean + k * sigma)`.
///
/// `sigma` is the population standard deviation over the whole map and the
/// comparison is strict, so a constant map yields an empty mask.
pub fn adaptive_threshold(map: &GrayImage, k: f64, v_min: f64) -> Result<BinaryMask> {
    if k < 0.0 || !k.is_finite() {
        return Err(Error::invalid(format!(
            "threshold factor must be nonnegative, got {k}"
        )));
    }
    let n = map.data().len() as f64;
    let mean = map.data().iter().sum::<f64>() / n;
    let var = map
        .data()
        .iter()
        .map(|&v| (v - mean) * (v - mean))
        .sum::<f64>()
        / n;
    let t = v_min.max(mean + k * var.sqrt());
    Ok(BinaryMask::from_fn(map.height(), map.width(), |y, x| {
        map.get(y, x) > t
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_map_gives_empty_mask() {
        let map = GrayImage::filled(8, 8, 0.4);
        let mask = adaptive_threshold(&map, 10.0, 0.0).unwrap();
        assert_eq!(mask.count(), 0);
    }

    #[test]
    fn single_spike_is_selected() {
        let mut map = GrayImage::zeros(32, 32);
        map.set(5, 9, 100.0);
        // mu = 100/1024, sigma = sqrt(100^2/1024 - mu^2); t = mu + 10 sigma ~= 31.3.
        let n = 1024.0;
        let mu = 100.0 / n;
        let sigma = (100.0f64.powi(2) / n - mu * mu).sqrt();
        assert!(mu + 10.0 * sigma < 100.0);
        let mask = adaptive_threshold(&map, 10.0, 0.0).unwrap();
        assert_eq!(mask.count(), 1);
        assert!(mask.get(5, 9));
    }

    #[test]
    fn k_zero_selects_above_mean() {
        let map = GrayImage::from_fn(4, 4, |y, x| if (y * 4 + x) < 8 { 0.0 } else { 1.0 });
        let mask = adaptive_threshold(&map, 0.0, 0.0).unwrap();
        // mean = 0.5; the ones are strictly above it.
        assert_eq!(mask.count(), 8);
        for y in 0..4 {
            for x in 0..4 {
                assert_eq!(mask.get(y, x), map.get(y, x) > 0.5);
            }
        }
    }

    #[test]
    fn mask_antitone_in_k() {
        let map = GrayImage::from_fn(16, 16, |y, x| ((y * 37 + x * 11) % 29) as f64 / 29.0);
        let m1 = adaptive_threshold(&map, 0.5, 0.0).unwrap();
        let m2 = adaptive_threshold(&map, 1.5, 0.0).unwrap();
        assert!(m2.is_subset_of(&m1));
    }

    #[test]
    fn v_min_floors_the_threshold() {
        let map = GrayImage::from_fn(4, 4, |y, _| y as f64 / 10.0);
        let mask = adaptive_threshold(&map, 0.0, 0.25).unwrap();
        for y in 0..4 {
            for x in 0..4 {
                assert_eq!(mask.get(y, x), map.get(y, x) > 0.25);
            }
        }
    }

    #[test]
    fn negative_k_rejected() {
        let map = GrayImage::zeros(2, 2);
        assert!(adaptive_threshold(&map, -1.0, 0.0).is_err());
    }
}
