//! Sinusoidal positional encodings for masks and sphere locations.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::maskgen::InscribedRect;
use crate::sphere::SphereDir;

/// A positional encoding vector; every entry lies in `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PosEncoding(Vec<f64>);

impl PosEncoding {
    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn distance(&self, other: &PosEncoding) -> f64 {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    fn concat(parts: &[PosEncoding]) -> PosEncoding {
        PosEncoding(parts.iter().flat_map(|p| p.0.iter().copied()).collect())
    }
}

/// Standard sinusoidal embedding of a scalar in `[0, 1]`:
/// entry `2i` is `sin(value / 10000^(2i/d))`, entry `2i+1` the matching cosine.
pub fn sinusoidal_embed(value: f64, d: usize) -> Result<PosEncoding> {
    if d < 2 || !d.is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "embedding dimension must be even and >= 2, got {d}"
        )));
    }
    if !(0.0..=1.0).contains(&value) {
        return Err(Error::invalid(format!(
            "embedding input {value} outside [0, 1]; callers normalize first"
        )));
    }
    let mut out = Vec::with_capacity(d);
    for i in 0..d / 2 {
        let freq = 10000f64.powf(-(2.0 * i as f64) / d as f64);
        out.push((value * freq).sin());
        out.push((value * freq).cos());
    }
    Ok(PosEncoding(out))
}

/// Mask positional encoding: the inscribed rectangle's center and size
/// normalized by the canvas, plus the pitch angle, each sinusoidally
/// embedded with `d` entries and concatenated (`5d` total).
///
/// Blocks in order: `x/w`, `y/h`, `rect_w/w`, `rect_h/h`, `(pitch + pi/2)/pi`.
pub fn mask_pos_encoding(
    rect: &InscribedRect,
    h: usize,
    w: usize,
    pitch: f64,
    d: usize,
) -> Result<PosEncoding> {
    if rect.x0() + rect.width() > w || rect.y0() + rect.height() > h {
        return Err(Error::invalid("rectangle exceeds canvas bounds"));
    }
    if pitch.abs() > FRAC_PI_2 {
        return Err(Error::PitchOutOfRange(pitch));
    }
    let scalars = [
        rect.center_x() / w as f64,
        rect.center_y() / h as f64,
        rect.width() as f64 / w as f64,
        rect.height() as f64 / h as f64,
        (pitch + FRAC_PI_2) / PI,
    ];
    let blocks = scalars
        .iter()
        .map(|&s| sinusoidal_embed(s, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(PosEncoding::concat(&blocks))
}

/// Spherical positional encoding of a direction: the components of its unit
/// vector, each remapped from `[-1, 1]` to `[0, 1]` and sinusoidally embedded
/// (`3d` entries total).
///
/// Continuous across the yaw seam, and distinct for antipodal directions.
pub fn spherical_pe(dir: SphereDir, d: usize) -> Result<PosEncoding> {
    let unit = dir.to_unit();
    let blocks = unit
        .iter()
        .map(|&c| sinusoidal_embed((c + 1.0) / 2.0, d))
        .collect::<Result<Vec<_>>>()?;
    Ok(PosEncoding::concat(&blocks))
}
