//! Core image representations and the filtering/thresholding primitives
//! shared by all detectors.

mod filter;
pub mod io;
mod patch;
mod threshold;

pub use filter::{box_mean, shift, white_tophat};
pub use patch::{
    fold_tensor, patch_tensor, patchify, unpatchify, PatchConfig, PatchMatrix, PatchOrigin,
    PatchTensor, Reducer,
};
pub use threshold::adaptive_threshold;

use crate::error::{Error, Result};

/// How out-of-range pixel coordinates are resolved.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BorderMode {
    /// Clamp to the nearest edge pixel.
    Replicate,
    /// Wrap around (modular indexing).
    Cyclic,
}

impl BorderMode {
    /// Resolve a possibly out-of-range coordinate against an axis of length `len`.
    #[inline]
    pub fn resolve(self, idx: isize, len: usize) -> usize {
        debug_assert!(len >= 1);
        match self {
            BorderMode::Replicate => idx.clamp(0, len as isize - 1) as usize,
            BorderMode::Cyclic => {
                let len = len as isize;
                (((idx % len) + len) % len) as usize
            }
        }
    }
}

/// A single-channel floating-point image, row-major, typically in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    height: usize,
    width: usize,
    data: Vec<f64>,
}

impl GrayImage {
    pub fn new(height: usize, width: usize, data: Vec<f64>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::invalid("image dimensions must be at least 1x1"));
        }
        if data.len() != height * width {
            return Err(Error::invalid(format!(
                "data length {} does not match {}x{}",
                data.len(),
                height,
                width
            )));
        }
        if data.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("image contains non-finite values"));
        }
        Ok(Self {
            height,
            width,
            data,
        })
    }

    pub fn zeros(height: usize, width: usize) -> Self {
        Self::filled(height, width, 0.0)
    }

    pub fn filled(height: usize, width: usize, value: f64) -> Self {
        assert!(height >= 1 && width >= 1);
        Self {
            height,
            width,
            data: vec![value; height * width],
        }
    }

    /// Build from a per-pixel closure `(y, x) -> value`.
    pub fn from_fn(height: usize, width: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(height * width);
        for y in 0..height {
            for x in 0..width {
                data.push(f(y, x));
            }
        }
        Self {
            height,
            width,
            data,
        }
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn get(&self, y: usize, x: usize) -> f64 {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, y: usize, x: usize, value: f64) {
        self.data[y * self.width + x] = value;
    }

    /// Border-resolved lookup at possibly out-of-range coordinates.
    #[inline]
    pub fn get_bordered(&self, y: isize, x: isize, border: BorderMode) -> f64 {
        let yy = border.resolve(y, self.height);
        let xx = border.resolve(x, self.width);
        self.data[yy * self.width + xx]
    }

    #[inline]
    pub fn data(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn min(&self) -> f64 {
        self.data.iter().cloned().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.data.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn mean(&self) -> f64 {
        self.data.iter().sum::<f64>() / self.data.len() as f64
    }

    /// Apply a function to every pixel, returning a new image.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            height: self.height,
            width: self.width,
            data: self.data.iter().map(|&v| f(v)).collect(),
        }
    }
}

/// A binary pixel mask with the same indexing convention as [`GrayImage`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    height: usize,
    width: usize,
    data: Vec<bool>,
}

impl BinaryMask {
    pub fn new(height: usize, width: usize, data: Vec<bool>) -> Result<Self> {
        if height == 0 || width == 0 {
            return Err(Error::invalid("mask dimensions must be at least 1x1"));
        }
        if data.len() != height * width {
            return Err(Error::invalid("mask data length does not match dims"));
        }
        Ok(Self {
            height,
            width,
            data,
        })
    }

    pub fn empty(height: usize, width: usize) -> Self {
        Self {
            height,
            width,
            data: vec![false; height * width],
        }
    }

    pub fn from_fn(height: usize, width: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut data = Vec::with_capacity(height * width);
        for y in 0..height {
            for x in 0..width {
                data.push(f(y, x));
            }
        }
        Self {
            height,
            width,
            data,
        }
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn get(&self, y: usize, x: usize) -> bool {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, y: usize, x: usize, value: bool) {
        self.data[y * self.width + x] = value;
    }

    #[inline]
    pub fn data(&self) -> &[bool] {
        &self.data
    }

    /// Number of set pixels.
    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    pub fn any(&self) -> bool {
        self.data.iter().any(|&b| b)
    }

    /// True if every set pixel of `self` is also set in `other`.
    pub fn is_subset_of(&self, other: &BinaryMask) -> bool {
        self.height == other.height
            && self.width == other.width
            && self
                .data
                .iter()
                .zip(&other.data)
                .all(|(&a, &b)| !a || b)
    }

    /// Pixelwise union with another mask of the same dims.
    pub fn union(&self, other: &BinaryMask) -> Result<BinaryMask> {
        if self.height != other.height || self.width != other.width {
            return Err(Error::invalid("mask dims mismatch in union"));
        }
        Ok(BinaryMask {
            height: self.height,
            width: self.width,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| a || b)
                .collect(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn border_resolution() {
        assert_eq!(BorderMode::Replicate.resolve(-3, 5), 0);
        assert_eq!(BorderMode::Replicate.resolve(7, 5), 4);
        assert_eq!(BorderMode::Replicate.resolve(2, 5), 2);
        assert_eq!(BorderMode::Cyclic.resolve(-1, 5), 4);
        assert_eq!(BorderMode::Cyclic.resolve(5, 5), 0);
        assert_eq!(BorderMode::Cyclic.resolve(-6, 5), 4);
    }

    #[test]
    fn image_invariants_enforced() {
        assert!(GrayImage::new(0, 4, vec![]).is_err());
        assert!(GrayImage::new(2, 2, vec![0.0; 3]).is_err());
        assert!(GrayImage::new(1, 2, vec![f64::NAN, 0.0]).is_err());
        let img = GrayImage::new(2, 3, vec![0.0, 0.1, 0.2, 0.3, 0.4, 0.5]).unwrap();
        assert_eq!(img.get(1, 2), 0.5);
    }

    #[test]
    fn mask_subset_and_union() {
        let a = BinaryMask::from_fn(3, 3, |y, x| y == x);
        let b = BinaryMask::from_fn(3, 3, |_, _| true);
        assert!(a.is_subset_of(&b));
        assert!(!b.is_subset_of(&a));
        assert_eq!(a.union(&b).unwrap().count(), 9);
    }
}
