//! Shared input builders for the kernel benchmarks.

use pano360_core::frame::MaskFrame;
use pano360_core::sphere::CameraPose;
use pano360_core::synth::{natural_canvas, natural_view};
use pano360_core::{PanoCanvas, PerspView};

pub fn horizon_pose(fov_deg: f64) -> CameraPose {
    CameraPose::from_angles(fov_deg, 0.0, 0.0).expect("valid pose")
}

pub fn canvas(h: usize, channels: usize) -> PanoCanvas {
    natural_canvas(h, channels).expect("valid canvas")
}

pub fn view(side: usize, channels: usize, fov_deg: f64) -> PerspView {
    natural_view(side, channels, horizon_pose(fov_deg)).expect("valid view")
}

/// A mask with a filled elliptical blob, the typical shape the inscribed
/// rectangle search sees.
pub fn blob_mask(h: usize, w: usize) -> MaskFrame {
    let mut mask = MaskFrame::zeros(h, w);
    let (cy, cx) = (h as f64 / 2.0, w as f64 / 2.0);
    for y in 0..h {
        for x in 0..w {
            let dy = (y as f64 - cy) / (h as f64 * 0.4);
            let dx = (x as f64 - cx) / (w as f64 * 0.35);
            mask.set(y, x, dx * dx + dy * dy <= 1.0);
        }
    }
    mask
}
