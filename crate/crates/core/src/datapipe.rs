//! Dataset curation over externally produced statistics: clip windowing,
//! optical-flow static filtering, and JSON-lines manifests.
//!
//! No video is ever decoded here. Shot boundaries, flow magnitudes, and
//! captions all arrive through file interfaces from external tools.

use std::collections::{BTreeMap, HashSet};
use std::io::{BufRead, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Output clips are 5 seconds at 20 fps.
pub const CLIP_SECONDS: usize = 5;
pub const CLIP_FPS: usize = 20;
pub const CLIP_FRAMES: usize = CLIP_SECONDS * CLIP_FPS;
/// Every second source frame is kept before resampling (2x speed-up).
pub const SPEEDUP: usize = 2;

/// Default flow-magnitude threshold for a frame to count as dynamic.
pub const DEFAULT_FLOW_THRESH: f32 = 0.1;
/// Minimum fraction of dynamic frames for a clip to be kept.
pub const DEFAULT_MIN_DYNAMIC_FRACTION: f64 = 0.10;

/// Per-frame mean optical-flow magnitudes, pre-normalized to `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FlowStats(Vec<f32>);

impl FlowStats {
    pub fn new(values: Vec<f32>) -> Result<Self> {
        for &v in &values {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::FlowOutOfRange(v));
            }
        }
        Ok(Self(values))
    }

    pub fn values(&self) -> &[f32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// One dataset clip: identity, provenance, timing, optional caption, and its
/// flow statistics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClipRecord {
    pub id: String,
    pub source: String,
    pub frame_count: usize,
    pub fps: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caption: Option<String>,
    pub flow: FlowStats,
}

impl ClipRecord {
    pub fn validate(&self) -> Result<()> {
        if self.frame_count == 0 {
            return Err(Error::invalid(format!("clip {}: frame_count is 0", self.id)));
        }
        if !self.fps.is_finite() || self.fps <= 0.0 {
            return Err(Error::invalid(format!("clip {}: fps must be positive", self.id)));
        }
        if self.flow.len() != self.frame_count {
            return Err(Error::invalid(format!(
                "clip {}: {} flow values for {} frames",
                self.id,
                self.flow.len(),
                self.frame_count
            )));
        }
        Ok(())
    }
}

/// A raw-frame window `[start, end)` sampled at `stride`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ClipWindow {
    pub start: usize,
    pub end: usize,
    pub stride: usize,
}

impl ClipWindow {
    pub fn output_frames(&self) -> usize {
        (self.end - self.start) / self.stride
    }
}

/// Tile a source video into non-overlapping clip windows.
///
/// Frames are dropped first (stride 2 for the 2x speed-up), then the strided
/// stream is resampled from the source rate to 20 fps by further striding, so
/// the combined stride is `round(src_fps / 10)`. Each window yields exactly
/// 100 output frames (5 s at 20 fps); a trailing remainder shorter than one
/// full window is dropped.
pub fn window_clips(total_frames: usize, src_fps: f64) -> Vec<ClipWindow> {
    let stride = ((src_fps * SPEEDUP as f64 / CLIP_FPS as f64).round() as usize).max(1);
    let span = CLIP_FRAMES * stride;
    let mut windows = Vec::new();
    let mut start = 0;
    while start + span <= total_frames {
        windows.push(ClipWindow {
            start,
            end: start + span,
            stride,
        });
        start += span;
    }
    windows
}

/// Keep a clip iff at least `min_fraction` of its frames have flow above
/// `thresh`. Clips sitting exactly on the fraction boundary are kept: the
/// rule drops strictly-static content only.
pub fn static_filter(stats: &FlowStats, thresh: f32, min_fraction: f64) -> Result<bool> {
    if stats.is_empty() {
        return Err(Error::EmptyFlowStats);
    }
    let dynamic = stats.values().iter().filter(|&&v| v > thresh).count();
    Ok(dynamic as f64 / stats.len() as f64 >= min_fraction)
}

/// Write records as a JSON-lines manifest sorted by id; returns the count.
pub fn build_manifest(records: &[ClipRecord], out: &Path) -> Result<usize> {
    let mut seen = HashSet::new();
    let mut sorted = BTreeMap::new();
    for r in records {
        r.validate()?;
        if !seen.insert(r.id.clone()) {
            return Err(Error::DuplicateClipId(r.id.clone()));
        }
        sorted.insert(r.id.clone(), r);
    }
    let mut file = std::io::BufWriter::new(std::fs::File::create(out)?);
    for r in sorted.values() {
        serde_json::to_writer(&mut file, r)?;
        file.write_all(b"\n")?;
    }
    file.flush()?;
    Ok(sorted.len())
}

/// Load a manifest written by [`build_manifest`].
pub fn load_manifest(path: &Path) -> Result<Vec<ClipRecord>> {
    let file = std::fs::File::open(path)?;
    let mut records = Vec::new();
    for (lineno, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: ClipRecord = serde_json::from_str(&line).map_err(|e| {
            Error::format("manifest", format!("{}:{}: {e}", path.display(), lineno + 1))
        })?;
        rec.validate()?;
        records.push(rec);
    }
    Ok(records)
}

#[derive(Deserialize)]
struct FlowLine {
    clip_id: String,
    values: Vec<f32>,
}

/// Load a flow-stats file: JSON-lines of `{clip_id, values: [f32, ...]}`.
pub fn load_flow_stats(path: &Path) -> Result<BTreeMap<String, FlowStats>> {
    let file = std::fs::File::open(path)?;
    let mut map = BTreeMap::new();
    for (lineno, line) in std::io::BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: FlowLine = serde_json::from_str(&line).map_err(|e| {
            Error::format(
                "flow stats",
                format!("{}:{}: {e}", path.display(), lineno + 1),
            )
        })?;
        if map
            .insert(rec.clip_id.clone(), FlowStats::new(rec.values)?)
            .is_some()
        {
            return Err(Error::DuplicateClipId(rec.clip_id));
        }
    }
    Ok(map)
}
