//! Spherical video geometry engine: the deterministic machinery behind
//! perspective-to-360 video conditioning.
//!
//! - [`sphere`]: coordinate conventions, camera poses, antipodal mapping,
//!   and fixed view sets (icosahedron faces, evaluation poses).
//! - [`resample`]: equirectangular <-> perspective reprojection, circular
//!   padding, and seam diagnostics.
//! - [`maskgen`]: video masks, maximum inscribed rectangles, positional
//!   encodings, and the cross-domain attention mask with antipodal
//!   activations.
//! - [`elevation`]: linear pitch-trajectory sampling and least-squares
//!   smoothing of external per-frame estimates.
//! - [`datapipe`]: clip windowing, optical-flow static filtering, and
//!   JSON-lines manifests.
//! - [`io`] / [`synth`]: frame file formats and deterministic test content.

pub mod datapipe;
pub mod elevation;
pub mod error;
pub mod frame;
pub mod io;
pub mod maskgen;
pub mod resample;
pub mod sphere;
pub mod synth;

pub use error::{Error, Result};
pub use frame::{FrameBuf, MaskFrame, PanoCanvas, PerspView};
pub use sphere::{CameraPose, PoseTrajectory, SphereDir};
