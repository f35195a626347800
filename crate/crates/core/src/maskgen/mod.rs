//! Video masking, anchor cropping, positional encodings, and cross-domain
//! attention-mask construction.

mod crossdomain;
mod encoding;
mod inscribed;

pub use crossdomain::{
    attention_bias, build_cross_domain_mask, max_antipode_relation_err_px, validate_geometry,
    BiasMatrix, ConsistencyReport, CrossDomainMask, CrossDomainParams, CrossDomainSidecar,
    MaskTriple, TripleTag, ViewPose, DEFAULT_ANTIPODAL_WEIGHT, DEFAULT_DROP_THRESHOLD,
    DEFAULT_LAMBDA_ANTIPODAL, DEFAULT_LAMBDA_DIRECT, DEFAULT_SIGMA,
};
pub use encoding::{mask_pos_encoding, sinusoidal_embed, spherical_pe, PosEncoding};
pub use inscribed::{max_inscribed_rect, InscribedRect};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frame::{FrameBuf, MaskFrame, PanoCanvas};
use crate::resample::frustum_mask;
use crate::sphere::PoseTrajectory;

/// Per-frame binary occupancy of a trajectory's P2E footprint on the canvas,
/// paired with the trajectory that produced it.
#[derive(Debug, Clone)]
pub struct VideoMask {
    frames: Vec<MaskFrame>,
    traj: PoseTrajectory,
}

impl VideoMask {
    /// Pair precomputed frame masks with their trajectory.
    ///
    /// Every frame must be non-empty: a valid fov always covers at least one
    /// pixel center at sane resolutions, and an empty footprint means the
    /// resolution cannot represent the view at all.
    pub fn new(frames: Vec<MaskFrame>, traj: PoseTrajectory) -> Result<Self> {
        if frames.len() != traj.len() {
            return Err(Error::LengthMismatch {
                anchor: frames.len(),
                trajectory: traj.len(),
            });
        }
        for (t, m) in frames.iter().enumerate() {
            if m.count_ones() == 0 {
                return Err(Error::DegenerateMask {
                    fov_deg: traj.get(t).map(|p| p.fov_deg()).unwrap_or(0.0),
                    h: m.height(),
                });
            }
            if m.height() != frames[0].height() || m.width() != frames[0].width() {
                return Err(Error::invalid("video mask frames differ in shape"));
            }
        }
        Ok(Self { frames, traj })
    }

    /// Rasterize the trajectory's frustum footprint per frame on an
    /// `h` x `2h` canvas.
    pub fn from_trajectory(traj: &PoseTrajectory, h: usize) -> Result<Self> {
        let frames = traj
            .frames()
            .par_iter()
            .map(|pose| frustum_mask(pose, h))
            .collect::<Result<Vec<_>>>()?;
        Self::new(frames, traj.clone())
    }

    pub fn frames(&self) -> &[MaskFrame] {
        &self.frames
    }

    pub fn trajectory(&self) -> &PoseTrajectory {
        &self.traj
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    /// Pixel-wise AND over all frames: the region known in every frame.
    pub fn intersection(&self) -> MaskFrame {
        let mut acc = self.frames[0].clone();
        for m in &self.frames[1..] {
            acc = acc.and(m).expect("uniform shapes checked by constructor");
        }
        acc
    }
}

/// Crop every canvas frame to the maximum inscribed rectangle of the
/// intersection of all frame masks (a temporally fixed crop).
///
/// Errors when the masks have an empty intersection, i.e. the trajectory
/// sweeps too far for any fixed rectangle to stay inside the known region.
pub fn anchor_crop(video: &[PanoCanvas], vmask: &VideoMask) -> Result<Vec<FrameBuf>> {
    if video.len() != vmask.len() {
        return Err(Error::LengthMismatch {
            anchor: video.len(),
            trajectory: vmask.len(),
        });
    }
    let common = vmask.intersection();
    if common.count_ones() == 0 {
        return Err(Error::EmptyIntersection);
    }
    let rect = max_inscribed_rect(&common)?;
    video
        .iter()
        .map(|c| {
            c.frame()
                .crop(rect.x0(), rect.y0(), rect.width(), rect.height())
        })
        .collect()
}

/// Per-frame variant: each frame is cropped to its own mask's inscribed
/// rectangle, so crop sizes vary across frames.
pub fn anchor_crop_per_frame(video: &[PanoCanvas], vmask: &VideoMask) -> Result<Vec<FrameBuf>> {
    if video.len() != vmask.len() {
        return Err(Error::LengthMismatch {
            anchor: video.len(),
            trajectory: vmask.len(),
        });
    }
    video
        .iter()
        .zip(vmask.frames())
        .map(|(c, m)| {
            let rect = max_inscribed_rect(m)?;
            c.frame()
                .crop(rect.x0(), rect.y0(), rect.width(), rect.height())
        })
        .collect()
}
