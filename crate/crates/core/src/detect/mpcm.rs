//! Multiscale patch-based contrast: the per-pixel reference computation and
//! the shifted whole-map variant that replaces the inner window loops.

use crate::error::{Error, Result};
use crate::imgproc::{box_mean, shift, BorderMode, GrayImage};

/// Eight neighbor-cell offsets in clockwise order; entry `k` is opposite
/// entry `k + 4`.
const NEIGHBOR_OFFSETS: [(isize, isize); 8] = [
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
    (1, 0),
    (1, -1),
    (0, -1),
];

/// Multiscale contrast configuration.
#[derive(Debug, Clone)]
pub struct MpcmConfig {
    /// Odd cell sizes; the neighbor cells sit at offsets of one cell size.
    pub scales: Vec<usize>,
    pub border: BorderMode,
    /// Clamp negative contrast products to zero in the output map.
    pub clamp_negative: bool,
}

impl Default for MpcmConfig {
    fn default() -> Self {
        Self {
            scales: vec![1, 3, 5, 7, 9],
            border: BorderMode::Replicate,
            clamp_negative: true,
        }
    }
}

impl MpcmConfig {
    fn validate(&self, img: &GrayImage) -> Result<()> {
        if self.scales.is_empty() {
            return Err(Error::invalid("at least one scale is required"));
        }
        for &n in &self.scales {
            if n % 2 == 0 || n == 0 {
                return Err(Error::invalid(format!("scale {n} must be odd and >= 1")));
            }
            if n >= img.height().min(img.width()) {
                return Err(Error::invalid(format!(
                    "scale {n} too large for {}x{} image",
                    img.height(),
                    img.width()
                )));
            }
        }
        Ok(())
    }
}

#[inline]
fn window_mean(img: &GrayImage, cy: usize, cx: usize, half: isize, border: BorderMode) -> f64 {
    let mut acc = 0.0;
    for u in -half..=half {
        for v in -half..=half {
            acc += img.get_bordered(cy as isize + u, cx as isize + v, border);
        }
    }
    let n = (2 * half + 1) as f64;
    acc / (n * n)
}

#[inline]
fn contrast_from_means(m0: f64, mi: &[f64; 8]) -> f64 {
    let mut pcm = f64::INFINITY;
    for k in 0..4 {
        let d_a = m0 - mi[k];
        let d_b = m0 - mi[k + 4];
        pcm = pcm.min(d_a * d_b);
    }
    pcm
}

/// Reference multiscale contrast map: every cell mean is recomputed per pixel
/// by direct window summation.
pub fn mpcm_naive(img: &GrayImage, cfg: &MpcmConfig) -> Result<GrayImage> {
    cfg.validate(img)?;
    let (h, w) = (img.height(), img.width());
    let mut out = GrayImage::filled(h, w, f64::NEG_INFINITY);

    for &n in &cfg.scales {
        let half = (n / 2) as isize;
        let step = n as isize;
        for y in 0..h {
            for x in 0..w {
                let m0 = window_mean(img, y, x, half, cfg.border);
                let mut mi = [0.0f64; 8];
                for (k, &(dy, dx)) in NEIGHBOR_OFFSETS.iter().enumerate() {
                    let cy = cfg.border.resolve(y as isize + step * dy, h);
                    let cx = cfg.border.resolve(x as isize + step * dx, w);
                    mi[k] = window_mean(img, cy, cx, half, cfg.border);
                }
                let pcm = contrast_from_means(m0, &mi);
                if pcm > out.get(y, x) {
                    out.set(y, x, pcm);
                }
            }
        }
    }

    if cfg.clamp_negative {
        out = out.map(|v| v.max(0.0));
    }
    Ok(out)
}

/// Accelerated multiscale contrast map: one box filter per scale, neighbor
/// cell means obtained by shifting the whole mean map. Identical result to
/// [`mpcm_naive`].
pub fn mpcm_shifted(img: &GrayImage, cfg: &MpcmConfig) -> Result<GrayImage> {
    cfg.validate(img)?;
    let (h, w) = (img.height(), img.width());
    let mut out = GrayImage::filled(h, w, f64::NEG_INFINITY);

    for &n in &cfg.scales {
        let step = n as isize;
        let m0 = box_mean(img, n, cfg.border)?;
        let neighbors: Vec<GrayImage> = NEIGHBOR_OFFSETS
            .iter()
            .map(|&(dy, dx)| shift(&m0, step * dy, step * dx, cfg.border))
            .collect::<Result<_>>()?;
        for y in 0..h {
            for x in 0..w {
                let c = m0.get(y, x);
                let mut pcm = f64::INFINITY;
                for k in 0..4 {
                    let d_a = c - neighbors[k].get(y, x);
                    let d_b = c - neighbors[k + 4].get(y, x);
                    pcm = pcm.min(d_a * d_b);
                }
                if pcm > out.get(y, x) {
                    out.set(y, x, pcm);
                }
            }
        }
    }

    if cfg.clamp_negative {
        out = out.map(|v| v.max(0.0));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_image(h: usize, w: usize, seed: u64) -> GrayImage {
        let mut rng = StdRng::seed_from_u64(seed);
        GrayImage::from_fn(h, w, |_, _| rng.random_range(0.0..1.0))
    }

    #[test]
    fn constant_image_gives_zero_map() {
        let img = GrayImage::filled(32, 32, 0.42);
        for f in [mpcm_naive, mpcm_shifted] {
            let map = f(&img, &MpcmConfig::default()).unwrap();
            assert!(map.data().iter().all(|&v| v.abs() < 1e-12));
        }
    }

    #[test]
    fn bright_cell_fires_at_center() {
        let mut img = GrayImage::zeros(25, 25);
        for y in 11..14 {
            for x in 11..14 {
                img.set(y, x, 1.0);
            }
        }
        let cfg = MpcmConfig {
            scales: vec![3],
            ..Default::default()
        };
        let map = mpcm_naive(&img, &cfg).unwrap();
        // Center cell mean 1, all eight neighbor cells 0: response 1.
        assert!((map.get(12, 12) - 1.0).abs() < 1e-12);
        let acc = mpcm_shifted(&img, &cfg).unwrap();
        assert!((acc.get(12, 12) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn dark_target_fires_positively() {
        let mut img = GrayImage::filled(25, 25, 0.8);
        for y in 11..14 {
            for x in 11..14 {
                img.set(y, x, 0.1);
            }
        }
        let cfg = MpcmConfig {
            scales: vec![3],
            clamp_negative: false,
            ..Default::default()
        };
        let map = mpcm_naive(&img, &cfg).unwrap();
        // Both differences in every opposite pair are negative: product positive.
        let expect = (0.1f64 - 0.8) * (0.1 - 0.8);
        assert!((map.get(12, 12) - expect).abs() < 1e-12);
    }

    #[test]
    fn shifted_equals_naive_everywhere() {
        let img = random_image(64, 48, 99);
        for border in [BorderMode::Replicate, BorderMode::Cyclic] {
            for &scale in &[1usize, 3, 5, 7, 9] {
                let cfg = MpcmConfig {
                    scales: vec![scale],
                    border,
                    clamp_negative: true,
                };
                let a = mpcm_naive(&img, &cfg).unwrap();
                let b = mpcm_shifted(&img, &cfg).unwrap();
                let max_diff = a
                    .data()
                    .iter()
                    .zip(b.data())
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0f64, f64::max);
                assert!(
                    max_diff <= 1e-9,
                    "scale {scale} border {border:?}: diff {max_diff}"
                );
            }
        }
    }

    #[test]
    fn full_scale_set_equivalence() {
        let img = random_image(40, 40, 5);
        let cfg = MpcmConfig::default();
        let a = mpcm_naive(&img, &cfg).unwrap();
        let b = mpcm_shifted(&img, &cfg).unwrap();
        for (x, y) in a.data().iter().zip(b.data()) {
            assert!((x - y).abs() <= 1e-9);
        }
    }

    #[test]
    fn even_scale_rejected() {
        let img = GrayImage::zeros(16, 16);
        let cfg = MpcmConfig {
            scales: vec![4],
            ..Default::default()
        };
        assert!(mpcm_naive(&img, &cfg).is_err());
        assert!(mpcm_shifted(&img, &cfg).is_err());
    }
}
