//! `filter`, `smooth`, `seamcheck`: thin wrappers over the dataset and
//! diagnostics operations.

use std::io::BufRead;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use pano360_core::datapipe::{build_manifest, load_flow_stats, static_filter, ClipRecord, FlowStats};
use pano360_core::elevation::{fit_line, load_estimates};
use pano360_core::frame::PanoCanvas;
use pano360_core::resample::seam_score;
use pano360_core::sphere::save_trajectory;

use crate::config::RunConfig;
use crate::{FilterArgs, SeamcheckArgs, SmoothArgs};

use super::emit_report;

/// Candidate record as accepted on input: flow may be inline or joined from
/// a separate stats file.
#[derive(Deserialize)]
struct CandidateRecord {
    id: String,
    source: String,
    frame_count: usize,
    fps: f64,
    #[serde(default)]
    caption: Option<String>,
    #[serde(default)]
    flow: Option<Vec<f32>>,
}

#[derive(Serialize)]
struct FilterReport {
    read: usize,
    kept: usize,
    dropped: usize,
    dropped_ids: Vec<String>,
    output: std::path::PathBuf,
}

pub fn filter(args: FilterArgs) -> Result<()> {
    let stats = match &args.flow_stats {
        Some(path) => load_flow_stats(path)?,
        None => Default::default(),
    };

    let file = std::fs::File::open(&args.records)
        .with_context(|| format!("opening {}", args.records.display()))?;
    let mut kept = Vec::new();
    let mut dropped_ids = Vec::new();
    let mut read = 0usize;
    for (lineno, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let cand: CandidateRecord = serde_json::from_str(&line)
            .with_context(|| format!("{}:{}", args.records.display(), lineno + 1))?;
        read += 1;

        let flow = match (cand.flow, stats.get(&cand.id)) {
            (Some(values), _) => FlowStats::new(values)?,
            (None, Some(joined)) => joined.clone(),
            (None, None) => bail!(
                "clip {}: no inline flow and no entry in --flow-stats",
                cand.id
            ),
        };
        let record = ClipRecord {
            id: cand.id,
            source: cand.source,
            frame_count: cand.frame_count,
            fps: cand.fps,
            caption: cand.caption,
            flow,
        };
        record.validate()?;
        if static_filter(&record.flow, args.thresh, args.min_fraction)? {
            kept.push(record);
        } else {
            dropped_ids.push(record.id);
        }
    }

    let written = build_manifest(&kept, &args.output)?;
    emit_report(&FilterReport {
        read,
        kept: written,
        dropped: dropped_ids.len(),
        dropped_ids,
        output: args.output,
    })
}

#[derive(Serialize)]
struct SmoothReport {
    n: usize,
    first_frame: i64,
    intercept_deg: f64,
    slope_deg_per_frame: f64,
    residual_rms_deg: f64,
    output: Option<std::path::PathBuf>,
}

pub fn smooth(args: SmoothArgs, cfg: &RunConfig) -> Result<()> {
    let series = load_estimates(&args.estimates)?;
    let fitted = fit_line(&series)?;

    let residual_rms = ((series
        .pitches_deg()
        .iter()
        .zip(fitted.samples_deg())
        .map(|(y, f)| (y - f) * (y - f))
        .sum::<f64>())
        / series.len() as f64)
        .sqrt();

    if let Some(out) = &args.output {
        let fov = args.fov.unwrap_or(cfg.fov_deg);
        save_trajectory(&fitted.to_pose_trajectory(fov)?, out)?;
    }

    emit_report(&SmoothReport {
        n: series.len(),
        first_frame: series.first_frame(),
        intercept_deg: fitted.start_deg(),
        slope_deg_per_frame: fitted.slope_deg_per_frame(),
        residual_rms_deg: residual_rms,
        output: args.output,
    })
}

#[derive(Serialize)]
struct SeamcheckReport {
    frames: usize,
    scores: Vec<f64>,
    mean_score: f64,
    max_score: f64,
}

pub fn seamcheck(args: SeamcheckArgs) -> Result<()> {
    let frames = pano360_core::io::load_video(&args.input)?;
    let scores = frames
        .into_iter()
        .map(|f| PanoCanvas::from_frame(f).map(|c| seam_score(&c)))
        .collect::<pano360_core::Result<Vec<_>>>()
        .context("seamcheck input must be equirectangular (w = 2h)")?;
    let mean = scores.iter().sum::<f64>() / scores.len() as f64;
    let max = scores.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    emit_report(&SeamcheckReport {
        frames: scores.len(),
        scores,
        mean_score: mean,
        max_score: max,
    })?;
    if let Some(gate) = args.max_score {
        if max > gate {
            bail!("seam score {max:.2} exceeds the {gate:.2} gate");
        }
    }
    Ok(())
}
