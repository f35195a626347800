//! Pixel containers: planar float frames, equirectangular canvases, square
//! perspective views, and binary masks.
//!
//! Channel count is generic so the same kernels serve 1-channel masksource
//! data, RGB frames, and 9-channel latent stacks. Storage is planar
//! (`[channel][row][col]`) to match the raw frame file format.

use crate::error::{Error, Result};
use crate::sphere::{check_aspect, CameraPose};

/// A planar float image: `channels` planes of `h` x `w` f32 samples.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameBuf {
    h: usize,
    w: usize,
    channels: usize,
    data: Vec<f32>,
}

impl FrameBuf {
    pub fn zeros(h: usize, w: usize, channels: usize) -> Self {
        Self {
            h,
            w,
            channels,
            data: vec![0.0; h * w * channels],
        }
    }

    pub fn from_data(h: usize, w: usize, channels: usize, data: Vec<f32>) -> Result<Self> {
        if data.len() != h * w * channels {
            return Err(Error::invalid(format!(
                "frame data length {} does not match {h}x{w}x{channels}",
                data.len()
            )));
        }
        Ok(Self {
            h,
            w,
            channels,
            data,
        })
    }

    pub fn height(&self) -> usize {
        self.h
    }

    pub fn width(&self) -> usize {
        self.w
    }

    pub fn channels(&self) -> usize {
        self.channels
    }

    pub fn data(&self) -> &[f32] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [f32] {
        &mut self.data
    }

    #[inline]
    pub fn get(&self, c: usize, y: usize, x: usize) -> f32 {
        self.data[(c * self.h + y) * self.w + x]
    }

    #[inline]
    pub fn set(&mut self, c: usize, y: usize, x: usize, value: f32) {
        self.data[(c * self.h + y) * self.w + x] = value;
    }

    /// One channel plane as a row-major slice.
    pub fn plane(&self, c: usize) -> &[f32] {
        &self.data[c * self.h * self.w..(c + 1) * self.h * self.w]
    }

    pub fn plane_mut(&mut self, c: usize) -> &mut [f32] {
        &mut self.data[c * self.h * self.w..(c + 1) * self.h * self.w]
    }

    /// Crop to a rectangle given by its top-left corner and size.
    pub fn crop(&self, x0: usize, y0: usize, cw: usize, ch: usize) -> Result<FrameBuf> {
        if x0 + cw > self.w || y0 + ch > self.h || cw == 0 || ch == 0 {
            return Err(Error::invalid(format!(
                "crop {cw}x{ch}+{x0}+{y0} exceeds frame {}x{}",
                self.h, self.w
            )));
        }
        let mut out = FrameBuf::zeros(ch, cw, self.channels);
        for c in 0..self.channels {
            for y in 0..ch {
                for x in 0..cw {
                    out.set(c, y, x, self.get(c, y0 + y, x0 + x));
                }
            }
        }
        Ok(out)
    }
}

/// An equirectangular frame; width is exactly twice the height.
#[derive(Debug, Clone, PartialEq)]
pub struct PanoCanvas {
    buf: FrameBuf,
}

impl PanoCanvas {
    pub fn zeros(h: usize, channels: usize) -> Result<Self> {
        check_aspect(h, 2 * h)?;
        Ok(Self {
            buf: FrameBuf::zeros(h, 2 * h, channels),
        })
    }

    pub fn from_frame(buf: FrameBuf) -> Result<Self> {
        check_aspect(buf.height(), buf.width())?;
        Ok(Self { buf })
    }

    pub fn height(&self) -> usize {
        self.buf.height()
    }

    pub fn width(&self) -> usize {
        self.buf.width()
    }

    pub fn channels(&self) -> usize {
        self.buf.channels()
    }

    pub fn frame(&self) -> &FrameBuf {
        &self.buf
    }

    pub fn frame_mut(&mut self) -> &mut FrameBuf {
        &mut self.buf
    }

    pub fn into_frame(self) -> FrameBuf {
        self.buf
    }
}

/// A square perspective frame together with the pose that produced or
/// consumes it.
#[derive(Debug, Clone, PartialEq)]
pub struct PerspView {
    buf: FrameBuf,
    pose: CameraPose,
}

impl PerspView {
    pub fn zeros(side: usize, channels: usize, pose: CameraPose) -> Result<Self> {
        if side == 0 {
            return Err(Error::invalid("view side must be positive"));
        }
        Ok(Self {
            buf: FrameBuf::zeros(side, side, channels),
            pose,
        })
    }

    pub fn from_frame(buf: FrameBuf, pose: CameraPose) -> Result<Self> {
        if buf.height() != buf.width() {
            return Err(Error::invalid(format!(
                "perspective views are square, got {}x{}",
                buf.height(),
                buf.width()
            )));
        }
        Ok(Self { buf, pose })
    }

    pub fn side(&self) -> usize {
        self.buf.height()
    }

    pub fn channels(&self) -> usize {
        self.buf.channels()
    }

    pub fn pose(&self) -> &CameraPose {
        &self.pose
    }

    pub fn frame(&self) -> &FrameBuf {
        &self.buf
    }

    pub fn frame_mut(&mut self) -> &mut FrameBuf {
        &mut self.buf
    }

    pub fn into_frame(self) -> FrameBuf {
        self.buf
    }
}

/// A binary occupancy grid (one byte per pixel, values 0 or 1).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskFrame {
    h: usize,
    w: usize,
    bits: Vec<u8>,
}

impl MaskFrame {
    pub fn zeros(h: usize, w: usize) -> Self {
        Self {
            h,
            w,
            bits: vec![0; h * w],
        }
    }

    pub fn from_bits(h: usize, w: usize, bits: Vec<u8>) -> Result<Self> {
        if bits.len() != h * w {
            return Err(Error::invalid(format!(
                "mask data length {} does not match {h}x{w}",
                bits.len()
            )));
        }
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::invalid("mask values must be 0 or 1"));
        }
        Ok(Self { h, w, bits })
    }

    pub fn height(&self) -> usize {
        self.h
    }

    pub fn width(&self) -> usize {
        self.w
    }

    #[inline]
    pub fn get(&self, y: usize, x: usize) -> bool {
        self.bits[y * self.w + x] != 0
    }

    #[inline]
    pub fn set(&mut self, y: usize, x: usize, on: bool) {
        self.bits[y * self.w + x] = on as u8;
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().map(|&b| b as usize).sum()
    }

    /// Pixel-wise AND with another mask of the same shape.
    pub fn and(&self, other: &MaskFrame) -> Result<MaskFrame> {
        if self.h != other.h || self.w != other.w {
            return Err(Error::invalid("mask shapes differ"));
        }
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(&a, &b)| a & b)
            .collect();
        Ok(MaskFrame {
            h: self.h,
            w: self.w,
            bits,
        })
    }

    /// Morphological erosion with an 8-connected structuring element,
    /// applied `iterations` times. Border pixels erode against the outside
    /// (treated as zero).
    pub fn erode(&self, iterations: usize) -> MaskFrame {
        let mut cur = self.clone();
        for _ in 0..iterations {
            let mut next = MaskFrame::zeros(self.h, self.w);
            for y in 0..self.h {
                for x in 0..self.w {
                    if !cur.get(y, x) {
                        continue;
                    }
                    let mut keep = y > 0 && y + 1 < self.h && x > 0 && x + 1 < self.w;
                    if keep {
                        'nb: for dy in -1i64..=1 {
                            for dx in -1i64..=1 {
                                let (ny, nx) = ((y as i64 + dy) as usize, (x as i64 + dx) as usize);
                                if !cur.get(ny, nx) {
                                    keep = false;
                                    break 'nb;
                                }
                            }
                        }
                    }
                    if keep {
                        next.set(y, x, true);
                    }
                }
            }
            cur = next;
        }
        cur
    }

    /// Mean row index of set pixels, or `None` for an empty mask.
    pub fn centroid_row(&self) -> Option<f64> {
        let mut sum = 0.0f64;
        let mut n = 0usize;
        for y in 0..self.h {
            for x in 0..self.w {
                if self.get(y, x) {
                    sum += y as f64;
                    n += 1;
                }
            }
        }
        (n > 0).then(|| sum / n as f64)
    }

    /// Circular shift along columns by `shift` (positive moves content right).
    pub fn shift_columns(&self, shift: i64) -> MaskFrame {
        let mut out = MaskFrame::zeros(self.h, self.w);
        let w = self.w as i64;
        for y in 0..self.h {
            for x in 0..self.w {
                if self.get(y, x) {
                    let nx = ((x as i64 + shift).rem_euclid(w)) as usize;
                    out.set(y, nx, true);
                }
            }
        }
        out
    }
}
