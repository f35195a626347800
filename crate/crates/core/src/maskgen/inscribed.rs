//! Maximum inscribed rectangle of a binary mask.

use crate::error::{Error, Result};
use crate::frame::MaskFrame;

/// An axis-aligned all-ones rectangle inside a mask.
///
/// The center uses continuous pixel coordinates: a rectangle spanning columns
/// `x0 .. x0 + w` has center `x0 + w/2`, so a full-width rectangle on a
/// `w`-column canvas normalizes to exactly 0.5.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InscribedRect {
    x0: usize,
    y0: usize,
    width: usize,
    height: usize,
}

impl InscribedRect {
    pub fn x0(&self) -> usize {
        self.x0
    }

    pub fn y0(&self) -> usize {
        self.y0
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn area(&self) -> usize {
        self.width * self.height
    }

    pub fn center_x(&self) -> f64 {
        self.x0 as f64 + self.width as f64 / 2.0
    }

    pub fn center_y(&self) -> f64 {
        self.y0 as f64 + self.height as f64 / 2.0
    }
}

/// Largest axis-aligned all-ones rectangle, via the histogram-stack method
/// in O(h*w). Ties break toward smaller center y, then smaller center x,
/// then larger width.
pub fn max_inscribed_rect(mask: &MaskFrame) -> Result<InscribedRect> {
    let (h, w) = (mask.height(), mask.width());
    let mut heights = vec![0usize; w];
    let mut best: Option<InscribedRect> = None;

    for row in 0..h {
        for (col, height) in heights.iter_mut().enumerate() {
            *height = if mask.get(row, col) { *height + 1 } else { 0 };
        }

        // Largest rectangle in histogram: each stack entry is (height, the
        // leftmost column that height extends back to). A zero sentinel
        // after the last column flushes the stack.
        let mut stack: Vec<(usize, usize)> = Vec::new();
        for (col, cur) in heights.iter().copied().chain(std::iter::once(0)).enumerate() {
            let mut left = col;
            while let Some(&(top_h, top_left)) = stack.last() {
                if top_h < cur {
                    break;
                }
                stack.pop();
                left = top_left;
                if top_h > 0 {
                    consider(&mut best, top_left, row + 1 - top_h, col - top_left, top_h);
                }
            }
            stack.push((cur, left));
        }
    }

    best.ok_or(Error::EmptyMask)
}

fn consider(best: &mut Option<InscribedRect>, x0: usize, y0: usize, width: usize, height: usize) {
    let cand = InscribedRect {
        x0,
        y0,
        width,
        height,
    };
    let replace = match best {
        None => true,
        Some(cur) => {
            let by_area = cand.area().cmp(&cur.area());
            let by_cy = cand.center_y().total_cmp(&cur.center_y()).reverse();
            let by_cx = cand.center_x().total_cmp(&cur.center_x()).reverse();
            let by_w = cand.width.cmp(&cur.width);
            by_area.then(by_cy).then(by_cx).then(by_w).is_gt()
        }
    };
    if replace {
        *best = Some(cand);
    }
}
