//! Deterministic synthetic test content: band-limited patterns that stand in
//! for photographic frames in round-trip checks and benchmarks.

use std::f64::consts::TAU;

use crate::error::Result;
use crate::frame::{PanoCanvas, PerspView};
use crate::sphere::{pixel_to_dir, CameraPose};

/// A smooth multi-frequency pattern in `[0, 1]` on a square view grid.
///
/// Feature scale is a sizeable fraction of the frame, so resampling it
/// bilinearly behaves like resampling a photograph without needing binary
/// assets.
pub fn natural_view(side: usize, channels: usize, pose: CameraPose) -> Result<PerspView> {
    let mut view = PerspView::zeros(side, channels, pose)?;
    let s = side as f64;
    for c in 0..channels {
        let phase = c as f64 * 0.7;
        for y in 0..side {
            for x in 0..side {
                let (fx, fy) = (x as f64 / s, y as f64 / s);
                let v = 0.5
                    + 0.16 * (TAU * (3.0 * fx + phase) + 1.3).sin()
                    + 0.14 * (TAU * (2.0 * fy - phase)).cos()
                    + 0.10 * (TAU * (4.0 * (fx + fy)) + 0.5).sin()
                    + 0.08 * (TAU * (5.0 * (fx - 0.5) * (fy - 0.5))).cos();
                view.frame_mut().set(c, y, x, v.clamp(0.0, 1.0) as f32);
            }
        }
    }
    Ok(view)
}

/// A seam-continuous smooth pattern on an equirectangular canvas, built from
/// periodic functions of yaw so the wrap edge stays continuous.
pub fn natural_canvas(h: usize, channels: usize) -> Result<PanoCanvas> {
    let mut canvas = PanoCanvas::zeros(h, channels)?;
    let w = 2 * h;
    for c in 0..channels {
        let phase = c as f64 * 0.9;
        for y in 0..h {
            for x in 0..w {
                let dir = pixel_to_dir(x as f64, y as f64, h, w)?;
                let (t, p) = (dir.yaw(), dir.pitch());
                let v = 0.5
                    + 0.18 * (2.0 * t + phase).sin()
                    + 0.14 * (3.0 * p).cos()
                    + 0.10 * (t + 4.0 * p).cos()
                    + 0.06 * (3.0 * t - phase).cos() * (2.0 * p).sin();
                canvas.frame_mut().set(c, y, x, v.clamp(0.0, 1.0) as f32);
            }
        }
    }
    Ok(canvas)
}

/// A horizontal ramp canvas: non-periodic in yaw, so the wrap seam carries a
/// full-range jump.
pub fn ramp_canvas(h: usize) -> Result<PanoCanvas> {
    let mut canvas = PanoCanvas::zeros(h, 1)?;
    let w = 2 * h;
    for y in 0..h {
        for x in 0..w {
            canvas
                .frame_mut()
                .set(0, y, x, x as f32 / (w - 1) as f32);
        }
    }
    Ok(canvas)
}
