//! Box filtering, image shifts, and grayscale morphology.

use super::{BorderMode, GrayImage};
use crate::error::{Error, Result};

/// Mean of the `n x n` window centered at each pixel, under the border rule.
///
/// Runs as two sliding-sum passes, one per axis, so the cost per pixel is
/// independent of `n`.
pub fn box_mean(img: &GrayImage, n: usize, border: BorderMode) -> Result<GrayImage> {
    if n % 2 == 0 || n == 0 {
        return Err(Error::invalid(format!("box size must be odd, got {n}")));
    }
    let half = (n / 2) as isize;
    let (h, w) = (img.height(), img.width());

    // Horizontal pass.
    let mut tmp = vec![0.0f64; h * w];
    for y in 0..h {
        let mut sum = 0.0;
        for k in -half..=half {
            sum += img.get_bordered(y as isize, k, border);
        }
        tmp[y * w] = sum;
        for x in 1..w {
            let enter = img.get_bordered(y as isize, x as isize + half, border);
            let leave = img.get_bordered(y as isize, x as isize - 1 - half, border);
            sum += enter - leave;
            tmp[y * w + x] = sum;
        }
    }

    // Vertical pass over the horizontal sums.
    let at = |y: isize, x: usize| -> f64 {
        let yy = border.resolve(y, h);
        tmp[yy * w + x]
    };
    let inv = 1.0 / (n * n) as f64;
    let mut out = GrayImage::zeros(h, w);
    for x in 0..w {
        let mut sum = 0.0;
        for k in -half..=half {
            sum += at(k, x);
        }
        out.set(0, x, sum * inv);
        for y in 1..h {
            sum += at(y as isize + half, x) - at(y as isize - 1 - half, x);
            out.set(y, x, sum * inv);
        }
    }
    Ok(out)
}

/// Translate the image so that `output[y, x] = img[y + dy, x + dx]`, resolving
/// out-of-range indices by the border rule.
pub fn shift(img: &GrayImage, dy: isize, dx: isize, border: BorderMode) -> Result<GrayImage> {
    let (h, w) = (img.height(), img.width());
    if dy.unsigned_abs() >= h || dx.unsigned_abs() >= w {
        return Err(Error::invalid(format!(
            "shift ({dy}, {dx}) out of range for {h}x{w} image"
        )));
    }
    let mut out = GrayImage::zeros(h, w);
    for y in 0..h {
        for x in 0..w {
            out.set(y, x, img.get_bordered(y as isize + dy, x as isize + dx, border));
        }
    }
    Ok(out)
}

/// Separable running min/max filter over an `n x n` flat square window.
fn square_extremum(img: &GrayImage, n: usize, take_min: bool) -> GrayImage {
    let half = (n / 2) as isize;
    let (h, w) = (img.height(), img.width());
    let pick = if take_min { f64::min } else { f64::max };
    let init = if take_min {
        f64::INFINITY
    } else {
        f64::NEG_INFINITY
    };
    let border = BorderMode::Replicate;

    let mut tmp = GrayImage::zeros(h, w);
    for y in 0..h {
        for x in 0..w {
            let mut v = init;
            for k in -half..=half {
                v = pick(v, img.get_bordered(y as isize, x as isize + k, border));
            }
            tmp.set(y, x, v);
        }
    }
    let mut out = GrayImage::zeros(h, w);
    for y in 0..h {
        for x in 0..w {
            let mut v = init;
            for k in -half..=half {
                v = pick(v, tmp.get_bordered(y as isize + k, x as isize, border));
            }
            out.set(y, x, v);
        }
    }
    out
}

/// Grayscale erosion with a flat square structuring element (replicate border).
pub fn erode(img: &GrayImage, se_size: usize) -> GrayImage {
    square_extremum(img, se_size, true)
}

/// Grayscale dilation with a flat square structuring element (replicate border).
pub fn dilate(img: &GrayImage, se_size: usize) -> GrayImage {
    square_extremum(img, se_size, false)
}

/// White top-hat: `img - opening(img)` with a flat square structuring element.
///
/// The opening never exceeds the input for a flat SE, so the result is
/// nonnegative without clamping.
pub fn white_tophat(img: &GrayImage, se_size: usize) -> Result<GrayImage> {
    if se_size % 2 == 0 || se_size < 3 {
        return Err(Error::invalid(format!(
            "structuring element size must be odd and >= 3, got {se_size}"
        )));
    }
    let opened = dilate(&erode(img, se_size), se_size);
    let mut out = img.clone();
    for (o, v) in out.data_mut().iter_mut().zip(opened.data()) {
        *o -= v;
    }
    Ok(out)
}
