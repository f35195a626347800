//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by geometry, mask, and pipeline operations.
#[derive(Debug, Error)]
pub enum Error {
    #[error("pitch {0} rad is outside [-pi/2, pi/2]")]
    PitchOutOfRange(f64),

    #[error("field of view {0} deg is outside the open interval (0, 180)")]
    FovOutOfRange(f64),

    #[error("canvas is {h}x{w}; equirectangular frames require w = 2h")]
    BadAspect { h: usize, w: usize },

    #[error("pixel coordinate (u={u}, v={v}) outside the valid range for {h}x{w}")]
    PixelOutOfRange { u: f64, v: f64, h: usize, w: usize },

    #[error("{0}")]
    InvalidArgument(String),

    #[error("trajectory frames disagree on fov: {first} vs {other} deg")]
    MixedFov { first: f64, other: f64 },

    #[error("anchor has {anchor} frames but trajectory has {trajectory}")]
    LengthMismatch { anchor: usize, trajectory: usize },

    #[error("mask contains no set pixels; no anchor region to work with")]
    EmptyMask,

    #[error("frame masks have empty intersection; trajectory sweep too large for a fixed anchor crop")]
    EmptyIntersection,

    #[error("projected mask is empty: fov {fov_deg} deg resolves to no pixel centers at h={h}")]
    DegenerateMask { fov_deg: f64, h: usize },

    #[error("estimate series is corrupt: {0}")]
    CorruptEstimates(String),

    #[error("need at least 2 distinct frames to fit a line, got {0}")]
    TooFewEstimates(usize),

    #[error("duplicate clip id `{0}` in manifest input")]
    DuplicateClipId(String),

    #[error("flow stats are empty")]
    EmptyFlowStats,

    #[error("flow value {0} outside the normalized range [0, 1]")]
    FlowOutOfRange(f32),

    #[error("malformed {what}: {detail}")]
    Format { what: &'static str, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("image error: {0}")]
    Image(#[from] image::ImageError),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn format(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Format {
            what,
            detail: detail.into(),
        }
    }
}
