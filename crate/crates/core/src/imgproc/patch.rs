//! Sliding-window rearrangements: patch-image matrices and patch tensors.

use ndarray::{Array2, Array3};

use super::GrayImage;
use crate::error::{Error, Result};

/// Square sliding-window geometry.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PatchConfig {
    pub patch_size: usize,
    pub stride: usize,
    /// Add a final window anchored at `dim - patch` per axis when the strided
    /// grid does not already reach it, so every pixel is covered.
    pub boundary_anchor: bool,
}

impl PatchConfig {
    pub fn new(patch_size: usize, stride: usize) -> Self {
        Self {
            patch_size,
            stride,
            boundary_anchor: true,
        }
    }

    fn validate(&self, height: usize, width: usize) -> Result<()> {
        if self.stride == 0 || self.stride > self.patch_size {
            return Err(Error::invalid(format!(
                "stride must satisfy 1 <= stride <= patch_size, got stride {} patch {}",
                self.stride, self.patch_size
            )));
        }
        if self.patch_size > height.min(width) {
            return Err(Error::invalid(format!(
                "patch size {} exceeds image dims {}x{}",
                self.patch_size, height, width
            )));
        }
        Ok(())
    }

    /// Window anchor offsets along one axis of length `dim`.
    pub fn anchors(&self, dim: usize) -> Vec<usize> {
        let last = dim - self.patch_size;
        let mut out: Vec<usize> = (0..=last).step_by(self.stride).collect();
        if self.boundary_anchor && *out.last().unwrap() != last {
            out.push(last);
        }
        out
    }
}

/// Where a patch rearrangement came from, enough to fold it back.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PatchOrigin {
    pub height: usize,
    pub width: usize,
    pub config: PatchConfig,
    /// Window anchors in row-major `(anchor_y, anchor_x)` order.
    pub anchors: Vec<(usize, usize)>,
}

/// Matrix whose columns are vectorized overlapping windows of an image.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchMatrix {
    /// `patch_size^2 x P`; column `j` is the row-major vectorization of window `j`.
    pub data: Array2<f64>,
    pub origin: PatchOrigin,
}

impl PatchMatrix {
    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }
}

/// 3-way stack of overlapping windows: `patch_size x patch_size x P`.
#[derive(Debug, Clone, PartialEq)]
pub struct PatchTensor {
    pub data: Array3<f64>,
    pub origin: PatchOrigin,
}

/// Per-pixel reduction used when folding overlapping windows back.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reducer {
    Mean,
    Median,
}

fn window_anchors(img: &GrayImage, cfg: &PatchConfig) -> Result<PatchOrigin> {
    cfg.validate(img.height(), img.width())?;
    let ys = cfg.anchors(img.height());
    let xs = cfg.anchors(img.width());
    let mut anchors = Vec::with_capacity(ys.len() * xs.len());
    for &ay in &ys {
        for &ax in &xs {
            anchors.push((ay, ax));
        }
    }
    Ok(PatchOrigin {
        height: img.height(),
        width: img.width(),
        config: *cfg,
        anchors,
    })
}

/// Rearrange overlapping windows into the columns of a matrix.
pub fn patchify(img: &GrayImage, cfg: &PatchConfig) -> Result<PatchMatrix> {
    let origin = window_anchors(img, cfg)?;
    let p = cfg.patch_size;
    let mut data = Array2::zeros((p * p, origin.anchors.len()));
    for (j, &(ay, ax)) in origin.anchors.iter().enumerate() {
        for u in 0..p {
            for v in 0..p {
                data[(u * p + v, j)] = img.get(ay + u, ax + v);
            }
        }
    }
    Ok(PatchMatrix { data, origin })
}

/// Fold a patch matrix back to an image, reducing overlapping entries.
pub fn unpatchify(pm: &PatchMatrix, reducer: Reducer) -> Result<GrayImage> {
    let p = pm.origin.config.patch_size;
    if pm.data.nrows() != p * p || pm.data.ncols() != pm.origin.anchors.len() {
        return Err(Error::invalid("patch matrix shape disagrees with origin"));
    }
    fold_windows(
        pm.origin.height,
        pm.origin.width,
        p,
        &pm.origin.anchors,
        reducer,
        |j, u, v| pm.data[(u * p + v, j)],
    )
}

/// Rearrange overlapping windows into slices of a 3-way tensor.
pub fn patch_tensor(img: &GrayImage, cfg: &PatchConfig) -> Result<PatchTensor> {
    let origin = window_anchors(img, cfg)?;
    let p = cfg.patch_size;
    let mut data = Array3::zeros((p, p, origin.anchors.len()));
    for (k, &(ay, ax)) in origin.anchors.iter().enumerate() {
        for u in 0..p {
            for v in 0..p {
                data[(u, v, k)] = img.get(ay + u, ax + v);
            }
        }
    }
    Ok(PatchTensor { data, origin })
}

/// Fold a patch tensor back to an image, reducing overlapping entries.
pub fn fold_tensor(pt: &PatchTensor, reducer: Reducer) -> Result<GrayImage> {
    let p = pt.origin.config.patch_size;
    if pt.data.dim() != (p, p, pt.origin.anchors.len()) {
        return Err(Error::invalid("patch tensor shape disagrees with origin"));
    }
    fold_windows(
        pt.origin.height,
        pt.origin.width,
        p,
        &pt.origin.anchors,
        reducer,
        |k, u, v| pt.data[(u, v, k)],
    )
}

fn fold_windows(
    height: usize,
    width: usize,
    p: usize,
    anchors: &[(usize, usize)],
    reducer: Reducer,
    entry: impl Fn(usize, usize, usize) -> f64,
) -> Result<GrayImage> {
    match reducer {
        Reducer::Mean => {
            let mut sum = vec![0.0f64; height * width];
            let mut cnt = vec![0u32; height * width];
            for (k, &(ay, ax)) in anchors.iter().enumerate() {
                for u in 0..p {
                    for v in 0..p {
                        let idx = (ay + u) * width + ax + v;
                        sum[idx] += entry(k, u, v);
                        cnt[idx] += 1;
                    }
                }
            }
            if cnt.iter().any(|&c| c == 0) {
                return Err(Error::invalid(
                    "window set does not cover every pixel; enable boundary_anchor",
                ));
            }
            let data = sum
                .iter()
                .zip(&cnt)
                .map(|(&s, &c)| s / c as f64)
                .collect();
            GrayImage::new(height, width, data)
        }
        Reducer::Median => {
            let mut buckets: Vec<Vec<f64>> = vec![Vec::new(); height * width];
            for (k, &(ay, ax)) in anchors.iter().enumerate() {
                for u in 0..p {
                    for v in 0..p {
                        buckets[(ay + u) * width + ax + v].push(entry(k, u, v));
                    }
                }
            }
            let mut data = Vec::with_capacity(height * width);
            for b in &mut buckets {
                if b.is_empty() {
                    return Err(Error::invalid(
                        "window set does not cover every pixel; enable boundary_anchor",
                    ));
                }
                b.sort_by(|a, b| a.partial_cmp(b).unwrap());
                let m = b.len() / 2;
                data.push(if b.len() % 2 == 1 {
                    b[m]
                } else {
                    0.5 * (b[m - 1] + b[m])
                });
            }
            GrayImage::new(height, width, data)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn checker(h: usize, w: usize) -> GrayImage {
        GrayImage::from_fn(h, w, |y, x| ((y * 31 + x * 17) % 13) as f64 / 13.0)
    }

    #[test]
    fn anchor_arithmetic_without_boundary() {
        let img = checker(60, 60);
        let cfg = PatchConfig {
            patch_size: 50,
            stride: 10,
            boundary_anchor: false,
        };
        let pm = patchify(&img, &cfg).unwrap();
        assert_eq!(pm.rows(), 2500);
        assert_eq!(pm.cols(), 4);
        assert_eq!(cfg.anchors(60), vec![0, 10]);
    }

    #[test]
    fn anchor_arithmetic_with_boundary_on_256() {
        let cfg = PatchConfig::new(50, 10);
        let anchors = cfg.anchors(256);
        assert_eq!(anchors.len(), 22);
        assert_eq!(anchors[0], 0);
        assert_eq!(anchors[20], 200);
        assert_eq!(anchors[21], 206);
        let img = checker(256, 256);
        let pm = patchify(&img, &cfg).unwrap();
        assert_eq!((pm.rows(), pm.cols()), (2500, 484));
    }

    #[test]
    fn whole_image_patch_is_vectorization() {
        let img = checker(6, 6);
        let cfg = PatchConfig::new(6, 1);
        let pm = patchify(&img, &cfg).unwrap();
        assert_eq!(pm.cols(), 1);
        for y in 0..6 {
            for x in 0..6 {
                assert_eq!(pm.data[(y * 6 + x, 0)], img.get(y, x));
            }
        }
    }

    #[test]
    fn roundtrip_is_identity() {
        let img = checker(37, 29);
        let cfg = PatchConfig::new(12, 5);
        let pm = patchify(&img, &cfg).unwrap();
        let back = unpatchify(&pm, Reducer::Mean).unwrap();
        for (a, b) in back.data().iter().zip(img.data()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn mean_of_two_overlapping_windows() {
        // Two 2x2 windows over a 2x3 image share the middle column.
        let img = GrayImage::new(2, 3, vec![1., 2., 3., 4., 5., 6.]).unwrap();
        let cfg = PatchConfig {
            patch_size: 2,
            stride: 1,
            boundary_anchor: false,
        };
        let mut pm = patchify(&img, &cfg).unwrap();
        // Overwrite the shared pixel (0,1): window 0 sees a=10, window 1 sees b=20.
        pm.data[(1, 0)] = 10.0; // window at (0,0), offset (0,1)
        pm.data[(0, 1)] = 20.0; // window at (0,1), offset (0,0)
        let out = unpatchify(&pm, Reducer::Mean).unwrap();
        assert!((out.get(0, 1) - 15.0).abs() < 1e-12);
    }

    #[test]
    fn random_overlap_matches_accumulation_oracle() {
        let img = checker(23, 19);
        let cfg = PatchConfig::new(7, 3);
        let pm = patchify(&img, &cfg).unwrap();
        let out = unpatchify(&pm, Reducer::Mean).unwrap();

        // Per-pixel accumulation oracle straight from the anchor list.
        let mut sum = vec![0.0; 23 * 19];
        let mut cnt = vec![0usize; 23 * 19];
        for &(ay, ax) in &pm.origin.anchors {
            for u in 0..7 {
                for v in 0..7 {
                    sum[(ay + u) * 19 + ax + v] += img.get(ay + u, ax + v);
                    cnt[(ay + u) * 19 + ax + v] += 1;
                }
            }
        }
        for i in 0..sum.len() {
            assert!((out.data()[i] - sum[i] / cnt[i] as f64).abs() < 1e-12);
        }
    }

    #[test]
    fn tensor_shape_and_slices() {
        let img = checker(60, 60);
        let cfg = PatchConfig {
            patch_size: 50,
            stride: 10,
            boundary_anchor: false,
        };
        let pt = patch_tensor(&img, &cfg).unwrap();
        assert_eq!(pt.data.dim(), (50, 50, 4));
        for (k, &(ay, ax)) in pt.origin.anchors.iter().enumerate() {
            for u in 0..50 {
                for v in 0..50 {
                    assert_eq!(pt.data[(u, v, k)], img.get(ay + u, ax + v));
                }
            }
        }
        let back = fold_tensor(&pt, Reducer::Mean).unwrap();
        for (a, b) in back.data().iter().zip(img.data()) {
            assert!((a - b).abs() < 1e-12);
        }
    }

    #[test]
    fn patch_larger_than_image_is_rejected() {
        let img = checker(8, 8);
        assert!(patchify(&img, &PatchConfig::new(9, 1)).is_err());
    }

    #[test]
    fn median_reducer_on_even_coverage() {
        let img = GrayImage::new(1, 3, vec![1.0, 2.0, 3.0]).unwrap();
        let cfg = PatchConfig {
            patch_size: 1,
            stride: 1,
            boundary_anchor: false,
        };
        let mut pm = patchify(&img, &cfg).unwrap();
        pm.data[(0, 1)] = 9.0;
        let out = unpatchify(&pm, Reducer::Median).unwrap();
        assert_eq!(out.data(), &[1.0, 9.0, 3.0]);
    }
}
