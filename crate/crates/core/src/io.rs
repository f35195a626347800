//! Frame I/O: 8-bit PNG sequences and the raw little-endian planar float
//! video format (`.pvf`), plus 0/255 mask PNGs.
//!
//! PVF layout: magic `PVF1`, then u32 LE `h, w, c, t`, then `t*c*h*w` f32 LE
//! samples ordered frame-major, channel-planar. PNG handles 1 or 3 channels;
//! anything else (latent stacks) goes through PVF.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use image::{GrayImage, ImageReader, RgbImage};

use crate::error::{Error, Result};
use crate::frame::{FrameBuf, MaskFrame};

const PVF_MAGIC: &[u8; 4] = b"PVF1";

/// Write frames (all the same shape) as one PVF file.
pub fn write_pvf(frames: &[FrameBuf], path: &Path) -> Result<()> {
    let first = frames
        .first()
        .ok_or_else(|| Error::invalid("cannot write an empty frame sequence"))?;
    let (h, w, c) = (first.height(), first.width(), first.channels());
    for f in frames {
        if f.height() != h || f.width() != w || f.channels() != c {
            return Err(Error::invalid("pvf frames must share one shape"));
        }
    }
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    out.write_all(PVF_MAGIC)?;
    for dim in [h, w, c, frames.len()] {
        out.write_all(&(dim as u32).to_le_bytes())?;
    }
    for f in frames {
        for &v in f.data() {
            out.write_all(&v.to_le_bytes())?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Read a PVF file written by [`write_pvf`].
pub fn read_pvf(path: &Path) -> Result<Vec<FrameBuf>> {
    let mut file = std::io::BufReader::new(std::fs::File::open(path)?);
    let mut magic = [0u8; 4];
    file.read_exact(&mut magic)?;
    if &magic != PVF_MAGIC {
        return Err(Error::format("pvf", format!("{}: bad magic", path.display())));
    }
    let mut dims = [0usize; 4];
    for d in &mut dims {
        let mut buf = [0u8; 4];
        file.read_exact(&mut buf)?;
        *d = u32::from_le_bytes(buf) as usize;
    }
    let [h, w, c, t] = dims;
    let per_frame = h * w * c;
    let mut frames = Vec::with_capacity(t);
    let mut raw = vec![0u8; per_frame * 4];
    for _ in 0..t {
        file.read_exact(&mut raw)?;
        let data = raw
            .chunks_exact(4)
            .map(|b| f32::from_le_bytes([b[0], b[1], b[2], b[3]]))
            .collect();
        frames.push(FrameBuf::from_data(h, w, c, data)?);
    }
    Ok(frames)
}

fn to_byte(v: f32) -> u8 {
    (v.clamp(0.0, 1.0) * 255.0).round() as u8
}

/// Write one frame as an 8-bit PNG (1 channel gray, 3 channels RGB).
pub fn save_frame_png(frame: &FrameBuf, path: &Path) -> Result<()> {
    let (h, w) = (frame.height(), frame.width());
    match frame.channels() {
        1 => {
            let img = GrayImage::from_fn(w as u32, h as u32, |x, y| {
                image::Luma([to_byte(frame.get(0, y as usize, x as usize))])
            });
            img.save(path)?;
        }
        3 => {
            let img = RgbImage::from_fn(w as u32, h as u32, |x, y| {
                image::Rgb([
                    to_byte(frame.get(0, y as usize, x as usize)),
                    to_byte(frame.get(1, y as usize, x as usize)),
                    to_byte(frame.get(2, y as usize, x as usize)),
                ])
            });
            img.save(path)?;
        }
        c => {
            return Err(Error::invalid(format!(
                "png supports 1 or 3 channels, got {c}; use .pvf for latent stacks"
            )))
        }
    }
    Ok(())
}

/// Load an 8-bit PNG as a float frame in `[0, 1]` (gray 1 channel, otherwise
/// RGB 3 channels).
pub fn load_frame_png(path: &Path) -> Result<FrameBuf> {
    let img = ImageReader::open(path)?.decode()?;
    match img {
        image::DynamicImage::ImageLuma8(g) => {
            let (w, h) = (g.width() as usize, g.height() as usize);
            let mut frame = FrameBuf::zeros(h, w, 1);
            for (x, y, p) in g.enumerate_pixels() {
                frame.set(0, y as usize, x as usize, p.0[0] as f32 / 255.0);
            }
            Ok(frame)
        }
        other => {
            let rgb = other.to_rgb8();
            let (w, h) = (rgb.width() as usize, rgb.height() as usize);
            let mut frame = FrameBuf::zeros(h, w, 3);
            for (x, y, p) in rgb.enumerate_pixels() {
                for c in 0..3 {
                    frame.set(c, y as usize, x as usize, p.0[c] as f32 / 255.0);
                }
            }
            Ok(frame)
        }
    }
}

/// Write a binary mask as a 0/255 gray PNG.
pub fn save_mask_png(mask: &MaskFrame, path: &Path) -> Result<()> {
    let img = GrayImage::from_fn(mask.width() as u32, mask.height() as u32, |x, y| {
        image::Luma([if mask.get(y as usize, x as usize) { 255 } else { 0 }])
    });
    img.save(path)?;
    Ok(())
}

/// Load a 0/255 mask PNG; any value of 128 or above counts as set.
pub fn load_mask_png(path: &Path) -> Result<MaskFrame> {
    let img = ImageReader::open(path)?.decode()?.to_luma8();
    let (w, h) = (img.width() as usize, img.height() as usize);
    let mut mask = MaskFrame::zeros(h, w);
    for (x, y, p) in img.enumerate_pixels() {
        mask.set(y as usize, x as usize, p.0[0] >= 128);
    }
    Ok(mask)
}

/// Load a frame sequence: a `.pvf` file, a single `.png`, or a directory of
/// PNGs in lexicographic order.
pub fn load_video(path: &Path) -> Result<Vec<FrameBuf>> {
    if path.is_dir() {
        let mut entries: Vec<PathBuf> = std::fs::read_dir(path)?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("png")))
            .collect();
        entries.sort();
        if entries.is_empty() {
            return Err(Error::invalid(format!(
                "{}: no png frames found",
                path.display()
            )));
        }
        entries.iter().map(|p| load_frame_png(p)).collect()
    } else {
        match path.extension().and_then(|e| e.to_str()) {
            Some("pvf") => read_pvf(path),
            Some("png") => Ok(vec![load_frame_png(path)?]),
            _ => Err(Error::invalid(format!(
                "{}: expected a .pvf file, a .png, or a directory of PNGs",
                path.display()
            ))),
        }
    }
}

/// Save a frame sequence: `.pvf` path writes the raw format, any other path
/// is treated as a directory of `frame_NNNNN.png`.
pub fn save_video(frames: &[FrameBuf], path: &Path) -> Result<()> {
    if path.extension().and_then(|e| e.to_str()) == Some("pvf") {
        return write_pvf(frames, path);
    }
    std::fs::create_dir_all(path)?;
    for (i, f) in frames.iter().enumerate() {
        save_frame_png(f, &path.join(format!("frame_{i:05}.png")))?;
    }
    Ok(())
}
