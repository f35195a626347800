//! `project` and `roundtrip`: reprojection between domains.

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;

use pano360_core::frame::{PanoCanvas, PerspView};
use pano360_core::resample::{e2p_with, p2e_with, roundtrip_psnr, Interp};
use pano360_core::sphere::{eval_views, load_trajectory, CameraPose, PoseTrajectory};
use pano360_core::{io, maskgen};

use crate::config::RunConfig;
use crate::{Direction, ProjectArgs, RoundtripArgs};

use super::emit_report;

/// Per-frame poses: a trajectory matching the frame count, or a single pose
/// broadcast across all frames.
fn poses_for_frames(traj: &PoseTrajectory, frames: usize) -> Result<Vec<CameraPose>> {
    if traj.len() == frames {
        Ok(traj.frames().to_vec())
    } else if traj.len() == 1 {
        Ok(vec![traj.frames()[0]; frames])
    } else {
        bail!(
            "trajectory has {} poses for {} frames (use one pose to broadcast)",
            traj.len(),
            frames
        );
    }
}

#[derive(Serialize)]
struct ProjectReport {
    direction: &'static str,
    frames: usize,
    outputs: Vec<PathBuf>,
    mask_output: Option<PathBuf>,
}

pub fn run(args: ProjectArgs, cfg: &RunConfig) -> Result<()> {
    let frames = io::load_video(&args.input)
        .with_context(|| format!("loading {}", args.input.display()))?;
    let interp: Interp = args.interp.into();

    match args.direction {
        Direction::E2p => {
            let canvases = frames
                .into_iter()
                .map(PanoCanvas::from_frame)
                .collect::<pano360_core::Result<Vec<_>>>()
                .context("e2p input must be equirectangular (w = 2h)")?;
            let side = args
                .side
                .unwrap_or_else(|| cfg.view_side_or_default(canvases[0].height()));

            let (poses, labels): (Vec<CameraPose>, Vec<String>) = if args.eval_views {
                let views = eval_views();
                let labels = views
                    .iter()
                    .map(|p| {
                        format!(
                            "view_{:03}",
                            p.dir().yaw().to_degrees().rem_euclid(360.0).round() as i64
                        )
                    })
                    .collect();
                (views.to_vec(), labels)
            } else {
                let path = args
                    .traj
                    .as_ref()
                    .ok_or_else(|| anyhow::anyhow!("e2p needs --traj or --eval-views"))?;
                let traj = load_trajectory(path)?;
                let poses = poses_for_frames(&traj, canvases.len())?;
                (poses, vec![String::new()])
            };

            let mut outputs = Vec::new();
            if args.eval_views {
                // One output sequence per fixed view, full input length each.
                for (pose, label) in poses.iter().zip(&labels) {
                    let views = canvases
                        .iter()
                        .map(|c| e2p_with(c, pose, side, interp).map(PerspView::into_frame))
                        .collect::<pano360_core::Result<Vec<_>>>()?;
                    let out = eval_output_path(&args.output, label);
                    io::save_video(&views, &out)?;
                    outputs.push(out);
                }
            } else {
                let views = canvases
                    .iter()
                    .zip(&poses)
                    .map(|(c, pose)| e2p_with(c, pose, side, interp).map(PerspView::into_frame))
                    .collect::<pano360_core::Result<Vec<_>>>()?;
                io::save_video(&views, &args.output)?;
                outputs.push(args.output.clone());
            }
            emit_report(&ProjectReport {
                direction: "e2p",
                frames: canvases.len(),
                outputs,
                mask_output: None,
            })
        }
        Direction::P2e => {
            if args.eval_views {
                bail!("--eval-views applies to e2p only");
            }
            let h = args.canvas_height.unwrap_or(cfg.canvas_h);
            let path = args
                .traj
                .as_ref()
                .ok_or_else(|| anyhow::anyhow!("p2e needs --traj"))?;
            let traj = load_trajectory(path)?;
            let poses = poses_for_frames(&traj, frames.len())?;

            let mut canvases = Vec::with_capacity(frames.len());
            let mut masks = Vec::with_capacity(frames.len());
            for (frame, pose) in frames.iter().zip(&poses) {
                let r = p2e_with(frame, pose, h, interp)?;
                canvases.push(r.canvas.into_frame());
                masks.push(r.mask);
            }
            io::save_video(&canvases, &args.output)?;

            let mask_dir = args.masks.clone().unwrap_or_else(|| mask_sibling(&args.output));
            std::fs::create_dir_all(&mask_dir)?;
            for (i, m) in masks.iter().enumerate() {
                io::save_mask_png(m, &mask_dir.join(format!("mask_{i:05}.png")))?;
            }
            emit_report(&ProjectReport {
                direction: "p2e",
                frames: canvases.len(),
                outputs: vec![args.output.clone()],
                mask_output: Some(mask_dir),
            })
        }
    }
}

fn eval_output_path(base: &Path, label: &str) -> PathBuf {
    if base.extension().and_then(|e| e.to_str()) == Some("pvf") {
        let stem = base.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
        base.with_file_name(format!("{stem}_{label}.pvf"))
    } else {
        base.join(label)
    }
}

fn mask_sibling(output: &Path) -> PathBuf {
    let stem = output.file_stem().and_then(|s| s.to_str()).unwrap_or("out");
    output.with_file_name(format!("{stem}_masks"))
}

#[derive(Serialize)]
struct RoundtripReport {
    frames: usize,
    canvas_h: usize,
    fov_deg: f64,
    erode_px: usize,
    psnr_db: Vec<f64>,
    min_psnr_db: f64,
    mean_psnr_db: f64,
}

pub fn roundtrip(args: RoundtripArgs, cfg: &RunConfig) -> Result<()> {
    let frames = io::load_video(&args.input)?;
    let fov = args.fov.unwrap_or(cfg.fov_deg);
    let h = args.canvas_height.unwrap_or(cfg.canvas_h);
    let pose = CameraPose::from_angles(
        fov,
        args.yaw_deg.to_radians(),
        args.pitch_deg.to_radians(),
    )?;

    let mut psnrs = Vec::with_capacity(frames.len());
    for frame in frames {
        let view = PerspView::from_frame(frame, pose)?;
        psnrs.push(roundtrip_psnr(&view, h, args.erode)?);
    }
    let min = psnrs.iter().cloned().fold(f64::INFINITY, f64::min);
    let mean = psnrs.iter().sum::<f64>() / psnrs.len() as f64;
    let report = RoundtripReport {
        frames: psnrs.len(),
        canvas_h: h,
        fov_deg: fov,
        erode_px: args.erode,
        psnr_db: psnrs,
        min_psnr_db: min,
        mean_psnr_db: mean,
    };
    emit_report(&report)?;
    if let Some(gate) = args.min_psnr {
        if min < gate {
            bail!("round-trip PSNR {min:.2} dB below the {gate:.2} dB gate");
        }
    }
    Ok(())
}

// Re-exported for the mask command, which shares the rect JSON shape.
#[derive(Serialize)]
pub struct RectRecord {
    pub frame: usize,
    pub cx: f64,
    pub cy: f64,
    pub w: usize,
    pub h: usize,
}

impl RectRecord {
    pub fn new(frame: usize, rect: &maskgen::InscribedRect) -> Self {
        Self {
            frame,
            cx: rect.center_x(),
            cy: rect.center_y(),
            w: rect.width(),
            h: rect.height(),
        }
    }
}
