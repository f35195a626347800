//! Inscribed-rectangle search vs an exhaustive oracle.
//!
//! The oracle enumerates every axis-aligned rectangle through a 2D prefix
//! sum, so it is trivially correct and independent of the histogram-stack
//! path it checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use pano360_core::frame::MaskFrame;
use pano360_core::maskgen::max_inscribed_rect;

struct PrefixSum {
    w: usize,
    sums: Vec<u32>, // (h+1) x (w+1)
}

impl PrefixSum {
    fn new(mask: &MaskFrame) -> Self {
        let (h, w) = (mask.height(), mask.width());
        let mut sums = vec![0u32; (h + 1) * (w + 1)];
        for y in 0..h {
            for x in 0..w {
                sums[(y + 1) * (w + 1) + (x + 1)] = mask.get(y, x) as u32
                    + sums[y * (w + 1) + (x + 1)]
                    + sums[(y + 1) * (w + 1) + x]
                    - sums[y * (w + 1) + x];
            }
        }
        Self { w, sums }
    }

    fn ones_in(&self, x0: usize, y0: usize, x1: usize, y1: usize) -> u32 {
        // Rectangle spanning columns x0..=x1 and rows y0..=y1.
        let w1 = self.w + 1;
        self.sums[(y1 + 1) * w1 + (x1 + 1)] + self.sums[y0 * w1 + x0]
            - self.sums[y0 * w1 + (x1 + 1)]
            - self.sums[(y1 + 1) * w1 + x0]
    }
}

fn oracle_max_area(mask: &MaskFrame) -> usize {
    let (h, w) = (mask.height(), mask.width());
    let ps = PrefixSum::new(mask);
    let mut best = 0usize;
    for y0 in 0..h {
        for y1 in y0..h {
            for x0 in 0..w {
                for x1 in x0..w {
                    let area = (y1 - y0 + 1) * (x1 - x0 + 1);
                    if area > best && ps.ones_in(x0, y0, x1, y1) as usize == area {
                        best = area;
                    }
                }
            }
        }
    }
    best
}

fn random_mask(rng: &mut ChaCha8Rng) -> MaskFrame {
    let h = rng.random_range(2..=24);
    let w = rng.random_range(2..=48);
    let fill = rng.random_range(0.2..0.9);
    let mut mask = MaskFrame::zeros(h, w);
    for y in 0..h {
        for x in 0..w {
            mask.set(y, x, rng.random_bool(fill));
        }
    }
    mask
}

#[test]
fn area_matches_exhaustive_oracle_on_200_random_masks() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut checked = 0;
    while checked < 200 {
        let mask = random_mask(&mut rng);
        let oracle = oracle_max_area(&mask);
        match max_inscribed_rect(&mask) {
            Ok(rect) => {
                assert_eq!(rect.area(), oracle, "mask {}x{}", mask.height(), mask.width());
                // Containment: every covered pixel is set.
                for y in rect.y0()..rect.y0() + rect.height() {
                    for x in rect.x0()..rect.x0() + rect.width() {
                        assert!(mask.get(y, x), "uncovered pixel inside rect");
                    }
                }
            }
            Err(_) => assert_eq!(oracle, 0, "search errored on a non-empty mask"),
        }
        checked += 1;
    }
}

#[test]
fn blob_masks_agree_with_oracle() {
    // Structured content: unions of random filled rectangles, which create
    // the staircase profiles that stress the histogram stack.
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let (h, w) = (rng.random_range(4..=24), rng.random_range(4..=48));
        let mut mask = MaskFrame::zeros(h, w);
        for _ in 0..rng.random_range(1..=4) {
            let y0 = rng.random_range(0..h);
            let x0 = rng.random_range(0..w);
            let y1 = rng.random_range(y0..h);
            let x1 = rng.random_range(x0..w);
            for y in y0..=y1 {
                for x in x0..=x1 {
                    mask.set(y, x, true);
                }
            }
        }
        let rect = max_inscribed_rect(&mask).unwrap();
        assert_eq!(rect.area(), oracle_max_area(&mask));
    }
}
