//! 8-connected component labeling on binary masks.

use crate::imgproc::BinaryMask;

/// Per-pixel component labels: `None` for background, `Some(id)` for the
/// component a foreground pixel belongs to. Ids are dense, starting at 0.
#[derive(Debug, Clone)]
pub struct ComponentLabels {
    pub labels: Vec<Option<u32>>,
    pub count: usize,
    width: usize,
}

impl ComponentLabels {
    #[inline]
    pub fn get(&self, y: usize, x: usize) -> Option<u32> {
        self.labels[y * self.width + x]
    }
}

/// Label 8-connected foreground components by flood fill.
pub fn label_components(mask: &BinaryMask) -> ComponentLabels {
    let (h, w) = (mask.height(), mask.width());
    let mut labels: Vec<Option<u32>> = vec![None; h * w];
    let mut next = 0u32;
    let mut stack: Vec<(usize, usize)> = Vec::new();

    for sy in 0..h {
        for sx in 0..w {
            if !mask.get(sy, sx) || labels[sy * w + sx].is_some() {
                continue;
            }
            labels[sy * w + sx] = Some(next);
            stack.push((sy, sx));
            while let Some((y, x)) = stack.pop() {
                for dy in -1isize..=1 {
                    for dx in -1isize..=1 {
                        if dy == 0 && dx == 0 {
                            continue;
                        }
                        let (ny, nx) = (y as isize + dy, x as isize + dx);
                        if ny < 0 || nx < 0 || ny >= h as isize || nx >= w as isize {
                            continue;
                        }
                        let (ny, nx) = (ny as usize, nx as usize);
                        if mask.get(ny, nx) && labels[ny * w + nx].is_none() {
                            labels[ny * w + nx] = Some(next);
                            stack.push((ny, nx));
                        }
                    }
                }
            }
            next += 1;
        }
    }
    ComponentLabels {
        labels,
        count: next as usize,
        width: w,
    }
}

/// Split a mask into one mask per 8-connected component.
pub fn split_components(mask: &BinaryMask) -> Vec<BinaryMask> {
    let labeled = label_components(mask);
    let mut out = vec![BinaryMask::empty(mask.height(), mask.width()); labeled.count];
    for y in 0..mask.height() {
        for x in 0..mask.width() {
            if let Some(id) = labeled.get(y, x) {
                out[id as usize].set(y, x, true);
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_pixels_are_one_component() {
        let mask = BinaryMask::from_fn(4, 4, |y, x| y == x);
        let labeled = label_components(&mask);
        assert_eq!(labeled.count, 1);
    }

    #[test]
    fn separated_blobs_are_distinct() {
        let mask = BinaryMask::from_fn(8, 8, |y, x| (y < 2 && x < 2) || (y > 5 && x > 5));
        let labeled = label_components(&mask);
        assert_eq!(labeled.count, 2);
        let parts = split_components(&mask);
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].count() + parts[1].count(), mask.count());
    }

    #[test]
    fn empty_mask_has_no_components() {
        let mask = BinaryMask::empty(5, 5);
        assert_eq!(label_components(&mask).count, 0);
    }
}
