//! Single-channel PNG / binary PGM (P5) reading and writing.
//!
//! Intensities are normalized to `[0, 1]` on load: 8-bit values divide by 255,
//! 16-bit values by 65535. Masks are written as 8-bit PNG with values {0, 255}.

use std::path::Path;

use image::{DynamicImage, ImageBuffer, ImageReader, Luma};

use super::{BinaryMask, GrayImage};
use crate::error::{Error, Result};

fn load_err(path: &Path, reason: impl ToString) -> Error {
    Error::Load {
        path: path.to_path_buf(),
        reason: reason.to_string(),
    }
}

/// Load a single-channel image, normalizing to `[0, 1]` by bit depth.
pub fn load_gray(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let reader = ImageReader::open(path).map_err(|e| load_err(path, e))?;
    let decoded = reader.decode().map_err(|e| load_err(path, e))?;
    let (w, h) = (decoded.width() as usize, decoded.height() as usize);
    let data: Vec<f64> = match decoded {
        DynamicImage::ImageLuma8(buf) => buf.pixels().map(|p| p.0[0] as f64 / 255.0).collect(),
        DynamicImage::ImageLuma16(buf) => {
            buf.pixels().map(|p| p.0[0] as f64 / 65535.0).collect()
        }
        other => {
            // Tolerate gray images stored with extra channels.
            let gray = other.into_luma16();
            gray.pixels().map(|p| p.0[0] as f64 / 65535.0).collect()
        }
    };
    GrayImage::new(h, w, data).map_err(|e| load_err(path, e))
}

/// Load a mask image; any nonzero pixel counts as set.
pub fn load_mask(path: impl AsRef<Path>) -> Result<BinaryMask> {
    let img = load_gray(&path)?;
    Ok(BinaryMask::from_fn(img.height(), img.width(), |y, x| {
        img.get(y, x) > 0.0
    }))
}

/// Write an image as 8-bit grayscale, mapping `[0, 1]` to `[0, 255]` with clamping.
pub fn save_gray_u8(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    let buf: ImageBuffer<Luma<u8>, Vec<u8>> =
        ImageBuffer::from_fn(img.width() as u32, img.height() as u32, |x, y| {
            let v = img.get(y as usize, x as usize).clamp(0.0, 1.0);
            Luma([(v * 255.0).round() as u8])
        });
    buf.save(path.as_ref())
        .map_err(|e| load_err(path.as_ref(), e))
}

/// Write an image as 16-bit grayscale, mapping `[0, 1]` to `[0, 65535]` with clamping.
pub fn save_gray_u16(img: &GrayImage, path: impl AsRef<Path>) -> Result<()> {
    let buf: ImageBuffer<Luma<u16>, Vec<u16>> =
        ImageBuffer::from_fn(img.width() as u32, img.height() as u32, |x, y| {
            let v = img.get(y as usize, x as usize).clamp(0.0, 1.0);
            Luma([(v * 65535.0).round() as u16])
        });
    buf.save(path.as_ref())
        .map_err(|e| load_err(path.as_ref(), e))
}

/// Linear rescale of an arbitrary map into `[0, 1]`, returning `(scaled, min, max)`
/// so the transform can be recorded alongside the written file.
pub fn rescale_unit(map: &GrayImage) -> (GrayImage, f64, f64) {
    let (lo, hi) = (map.min(), map.max());
    if hi > lo {
        let span = hi - lo;
        (map.map(|v| (v - lo) / span), lo, hi)
    } else {
        (map.map(|_| 0.0), lo, hi)
    }
}

/// Write a mask as 8-bit PNG with values {0, 255}.
pub fn save_mask(mask: &BinaryMask, path: impl AsRef<Path>) -> Result<()> {
    let buf: ImageBuffer<Luma<u8>, Vec<u8>> =
        ImageBuffer::from_fn(mask.width() as u32, mask.height() as u32, |x, y| {
            Luma([if mask.get(y as usize, x as usize) { 255 } else { 0 }])
        });
    buf.save(path.as_ref())
        .map_err(|e| load_err(path.as_ref(), e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn png_u8_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("img.png");
        let img = GrayImage::from_fn(9, 7, |y, x| ((y * 7 + x) as f64 / 62.0 * 255.0).round() / 255.0);
        save_gray_u8(&img, &p).unwrap();
        let back = load_gray(&p).unwrap();
        assert_eq!((back.height(), back.width()), (9, 7));
        for (a, b) in back.data().iter().zip(img.data()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn png_u16_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("img16.png");
        let img = GrayImage::from_fn(5, 5, |y, x| {
            ((y * 5 + x) as f64 / 24.0 * 65535.0).round() / 65535.0
        });
        save_gray_u16(&img, &p).unwrap();
        let back = load_gray(&p).unwrap();
        for (a, b) in back.data().iter().zip(img.data()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn pgm_p5_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("img.pgm");
        let img = GrayImage::from_fn(4, 6, |y, x| ((y * 6 + x) as f64 / 23.0 * 255.0).round() / 255.0);
        save_gray_u8(&img, &p).unwrap();
        let back = load_gray(&p).unwrap();
        for (a, b) in back.data().iter().zip(img.data()) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn mask_roundtrip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("mask.png");
        let mask = BinaryMask::from_fn(8, 8, |y, x| (y + x) % 3 == 0);
        save_mask(&mask, &p).unwrap();
        assert_eq!(load_mask(&p).unwrap(), mask);
    }

    #[test]
    fn corrupted_file_is_a_load_error() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("broken.png");
        std::fs::write(&p, b"not a png").unwrap();
        match load_gray(&p) {
            Err(Error::Load { path, .. }) => assert_eq!(path, p),
            other => panic!("expected load error, got {other:?}"),
        }
    }

    #[test]
    fn rescale_records_bounds() {
        let img = GrayImage::new(1, 3, vec![-2.0, 0.0, 6.0]).unwrap();
        let (scaled, lo, hi) = rescale_unit(&img);
        assert_eq!((lo, hi), (-2.0, 6.0));
        assert_eq!(scaled.data(), &[0.0, 0.25, 1.0]);
    }
}
