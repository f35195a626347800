//! `mask`: rasterize a trajectory's video mask and its per-frame inscribed
//! rectangles and positional encodings.

use anyhow::{Context, Result};
use serde::Serialize;

use pano360_core::elevation::sample_trajectory;
use pano360_core::io::save_mask_png;
use pano360_core::maskgen::{mask_pos_encoding, max_inscribed_rect, VideoMask};
use pano360_core::sphere::load_trajectory;

use crate::config::RunConfig;
use crate::MaskArgs;

use super::emit_report;
use super::project::RectRecord;

#[derive(Serialize)]
struct EncodingRecord {
    frame: usize,
    values: Vec<f64>,
}

#[derive(Serialize)]
struct MaskReport {
    frames: usize,
    canvas_h: usize,
    canvas_w: usize,
    fov_deg: f64,
    sampled_seed: Option<u64>,
    output: std::path::PathBuf,
}

pub fn run(args: MaskArgs, cfg: &RunConfig) -> Result<()> {
    let h = args.canvas_height.unwrap_or(cfg.canvas_h);
    let fov = args.fov.unwrap_or(cfg.fov_deg);
    let embed_dim = args.embed_dim.unwrap_or(cfg.embed_dim);

    let (traj, sampled_seed) = if args.sample {
        let seed = args.seed.unwrap_or(cfg.seed);
        let elevation = sample_trajectory(args.frames, seed);
        (elevation.to_pose_trajectory(fov)?, Some(seed))
    } else {
        let path = args.traj.as_ref().expect("clap enforces traj without --sample");
        (
            load_trajectory(path).with_context(|| format!("loading {}", path.display()))?,
            None,
        )
    };

    let vmask = VideoMask::from_trajectory(&traj, h)?;
    std::fs::create_dir_all(&args.output)?;

    let mut rects = Vec::with_capacity(vmask.len());
    let mut encodings = Vec::with_capacity(vmask.len());
    for (t, frame_mask) in vmask.frames().iter().enumerate() {
        save_mask_png(frame_mask, &args.output.join(format!("mask_{t:05}.png")))?;
        let rect = max_inscribed_rect(frame_mask)?;
        let pitch = traj.frames()[t].dir().pitch();
        let enc = mask_pos_encoding(&rect, h, 2 * h, pitch, embed_dim)?;
        rects.push(RectRecord::new(t, &rect));
        encodings.push(EncodingRecord {
            frame: t,
            values: enc.values().to_vec(),
        });
    }

    write_json(&args.output.join("rects.json"), &rects)?;
    write_json(&args.output.join("encodings.json"), &encodings)?;

    emit_report(&MaskReport {
        frames: vmask.len(),
        canvas_h: h,
        canvas_w: 2 * h,
        fov_deg: fov,
        sampled_seed,
        output: args.output,
    })
}

fn write_json<T: Serialize>(path: &std::path::Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}
