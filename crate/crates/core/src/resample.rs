//! Reprojection kernels between equirectangular canvases and square
//! perspective views, plus circular padding and seam diagnostics.
//!
//! Both directions are target-to-source: every output pixel is computed by
//! sampling the source, so perspective outputs are hole-free by construction.
//! The frustum test works in a yaw-aligned frame (subtract the pose yaw, then
//! rotate by the pose pitch), which keeps azimuthal symmetry exact: projecting
//! at yaw `k * 2pi/w` equals projecting at yaw 0 and circularly shifting the
//! result by `k` columns.

use std::f64::consts::{PI, TAU};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frame::{FrameBuf, MaskFrame, PanoCanvas, PerspView};
use crate::maskgen::VideoMask;
use crate::sphere::{dir_to_pixel, CameraPose, PoseTrajectory, SphereDir};

/// Boundary margin of the frustum test: pixels within this distance of the
/// frustum boundary (in tangent-plane units) count as outside, so boundary
/// ties resolve deterministically.
const FRUSTUM_TIE: f64 = 1e-12;

/// Interpolation used when sampling the source grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Interp {
    #[default]
    Bilinear,
    /// For mask-like content where blending labels is wrong.
    Nearest,
}

/// Per-frame result of a perspective-to-equirectangular projection.
///
/// `mask` is 1 exactly where `canvas` received a projected value; everywhere
/// else the canvas holds zeros.
#[derive(Debug, Clone)]
pub struct ProjectionResult {
    pub canvas: PanoCanvas,
    pub mask: MaskFrame,
}

#[derive(Clone, Copy)]
struct PoseTrig {
    yaw: f64,
    sin_pitch: f64,
    cos_pitch: f64,
    tan_half: f64,
}

impl PoseTrig {
    fn new(pose: &CameraPose) -> Self {
        let (sin_pitch, cos_pitch) = pose.dir().pitch().sin_cos();
        Self {
            yaw: pose.dir().yaw(),
            sin_pitch,
            cos_pitch,
            tan_half: pose.tan_half_fov(),
        }
    }

    /// Tangent-plane coordinates `(a right, b up)` of a direction given by
    /// its pitch sin/cos and the sin/cos of its yaw relative to the pose.
    /// `None` when the direction is not strictly inside the frustum.
    #[inline]
    fn tangent(&self, sp: f64, cp: f64, sin_rel: f64, cos_rel: f64) -> Option<(f64, f64)> {
        let dx = cp * cos_rel;
        let dy = cp * sin_rel;
        let dz = sp;
        let cx = self.cos_pitch * dx + self.sin_pitch * dz;
        if cx <= FRUSTUM_TIE {
            return None;
        }
        let a = dy / cx;
        let b = (-self.sin_pitch * dx + self.cos_pitch * dz) / cx;
        if self.tan_half - a.abs() > FRUSTUM_TIE && self.tan_half - b.abs() > FRUSTUM_TIE {
            Some((a, b))
        } else {
            None
        }
    }

    /// Fractional view pixel of tangent coordinates on a `side` x `side` grid.
    #[inline]
    fn tangent_to_pixel(&self, a: f64, b: f64, side: usize) -> (f64, f64) {
        let s = side as f64;
        let px = (a / self.tan_half + 1.0) / 2.0 * s - 0.5;
        let py = (1.0 - b / self.tan_half) / 2.0 * s - 0.5;
        (px, py)
    }

    /// World direction of the view pixel `(px, py)` on a `side` grid.
    #[inline]
    fn pixel_dir(&self, px: f64, py: f64, side: usize) -> SphereDir {
        let s = side as f64;
        let a = ((px + 0.5) / s * 2.0 - 1.0) * self.tan_half;
        let b = (1.0 - (py + 0.5) / s * 2.0) * self.tan_half;
        // Camera-frame ray (1, a, b) rotated by pitch, then yaw restored.
        let dx = self.cos_pitch - self.sin_pitch * b;
        let dy = a;
        let dz = self.sin_pitch + self.cos_pitch * b;
        let norm = (dx * dx + dy * dy + dz * dz).sqrt();
        let yaw = self.yaw + dy.atan2(dx);
        let pitch = (dz / norm).clamp(-1.0, 1.0).asin();
        SphereDir::new(yaw, pitch).expect("pixel ray pitch is in range")
    }
}

/// True when `dir` lies strictly inside the frustum of `pose`.
pub fn view_contains(pose: &CameraPose, dir: &SphereDir) -> bool {
    let trig = PoseTrig::new(pose);
    let (sp, cp) = dir.pitch().sin_cos();
    let (sr, cr) = (dir.yaw() - trig.yaw).sin_cos();
    trig.tangent(sp, cp, sr, cr).is_some()
}

/// Fractional view pixel where `dir` lands on a `side` grid, or `None` when
/// it falls outside the frustum.
pub fn project_into_view(pose: &CameraPose, dir: &SphereDir, side: usize) -> Option<(f64, f64)> {
    let trig = PoseTrig::new(pose);
    let (sp, cp) = dir.pitch().sin_cos();
    let (sr, cr) = (dir.yaw() - trig.yaw).sin_cos();
    trig.tangent(sp, cp, sr, cr)
        .map(|(a, b)| trig.tangent_to_pixel(a, b, side))
}

/// Direction of the center of view pixel `(px, py)` under `pose`.
pub fn view_pixel_dir(pose: &CameraPose, px: f64, py: f64, side: usize) -> SphereDir {
    PoseTrig::new(pose).pixel_dir(px, py, side)
}

#[inline]
fn lerp(a: f32, b: f32, f: f32) -> f32 {
    a + (b - a) * f
}

#[inline]
fn sample_plane_wrap_clamp(plane: &[f32], h: usize, w: usize, u: f64, v: f64, interp: Interp) -> f32 {
    match interp {
        Interp::Nearest => {
            let x = (u.round() as i64).rem_euclid(w as i64) as usize;
            let y = (v.round() as i64).clamp(0, h as i64 - 1) as usize;
            plane[y * w + x]
        }
        Interp::Bilinear => {
            let u0 = u.floor();
            let v0 = v.floor();
            let fu = (u - u0) as f32;
            let fv = (v - v0) as f32;
            let x0 = (u0 as i64).rem_euclid(w as i64) as usize;
            let x1 = (x0 + 1) % w;
            let y0 = (v0 as i64).clamp(0, h as i64 - 1) as usize;
            let y1 = ((v0 as i64) + 1).clamp(0, h as i64 - 1) as usize;
            // Lerp form keeps constant content exactly constant.
            let top = lerp(plane[y0 * w + x0], plane[y0 * w + x1], fu);
            let bot = lerp(plane[y1 * w + x0], plane[y1 * w + x1], fu);
            lerp(top, bot, fv)
        }
    }
}

#[inline]
fn sample_plane_clamped(plane: &[f32], h: usize, w: usize, x: f64, y: f64, interp: Interp) -> f32 {
    match interp {
        Interp::Nearest => {
            let xi = (x.round() as i64).clamp(0, w as i64 - 1) as usize;
            let yi = (y.round() as i64).clamp(0, h as i64 - 1) as usize;
            plane[yi * w + xi]
        }
        Interp::Bilinear => {
            let x0 = x.floor();
            let y0 = y.floor();
            let fx = (x - x0) as f32;
            let fy = (y - y0) as f32;
            let xi0 = (x0 as i64).clamp(0, w as i64 - 1) as usize;
            let xi1 = ((x0 as i64) + 1).clamp(0, w as i64 - 1) as usize;
            let yi0 = (y0 as i64).clamp(0, h as i64 - 1) as usize;
            let yi1 = ((y0 as i64) + 1).clamp(0, h as i64 - 1) as usize;
            let top = lerp(plane[yi0 * w + xi0], plane[yi0 * w + xi1], fx);
            let bot = lerp(plane[yi1 * w + xi0], plane[yi1 * w + xi1], fx);
            lerp(top, bot, fy)
        }
    }
}

/// Extract a `side` x `side` perspective view from an equirectangular canvas.
///
/// Every output pixel traces its ray, converts to a sphere direction, and
/// samples the canvas with circular wrap in `u` and clamp in `v`; the output
/// has no holes for any valid pose.
pub fn e2p(canvas: &PanoCanvas, pose: &CameraPose, side: usize) -> Result<PerspView> {
    e2p_with(canvas, pose, side, Interp::Bilinear)
}

pub fn e2p_with(
    canvas: &PanoCanvas,
    pose: &CameraPose,
    side: usize,
    interp: Interp,
) -> Result<PerspView> {
    if side < 2 {
        return Err(Error::invalid("view side must be at least 2"));
    }
    let (h, w, channels) = (canvas.height(), canvas.width(), canvas.channels());
    let trig = PoseTrig::new(pose);

    // Canvas sample coordinates per view pixel, row-parallel.
    let coords: Vec<(f64, f64)> = (0..side)
        .into_par_iter()
        .flat_map_iter(|py| {
            (0..side).map(move |px| {
                let dir = trig.pixel_dir(px as f64, py as f64, side);
                dir_to_pixel(dir, h, w).expect("canvas aspect checked by type")
            })
        })
        .collect();

    let mut out = FrameBuf::zeros(side, side, channels);
    for c in 0..channels {
        let plane = canvas.frame().plane(c);
        let dst = out.plane_mut(c);
        dst.par_iter_mut().zip(coords.par_iter()).for_each(|(d, &(u, v))| {
            *d = sample_plane_wrap_clamp(plane, h, w, u, v, interp);
        });
    }
    PerspView::from_frame(out, *pose)
}

/// Project a perspective view onto an equirectangular canvas of height `h`.
///
/// Each canvas pixel whose center direction lies strictly inside the view
/// frustum samples the view and sets the mask; everything else stays zero.
pub fn p2e(view: &PerspView, h: usize) -> Result<ProjectionResult> {
    p2e_with(view.frame(), view.pose(), h, Interp::Bilinear)
}

/// [`p2e`] with an explicit frame/pose pairing and interpolation choice.
pub fn p2e_with(
    frame: &FrameBuf,
    pose: &CameraPose,
    h: usize,
    interp: Interp,
) -> Result<ProjectionResult> {
    if h < 2 {
        return Err(Error::invalid("canvas height must be at least 2"));
    }
    if frame.height() != frame.width() {
        return Err(Error::invalid("perspective frames are square"));
    }
    let w = 2 * h;
    let side = frame.height();
    let channels = frame.channels();
    let trig = PoseTrig::new(pose);

    let coords = frustum_coords(&trig, h, side);

    let mut mask = MaskFrame::zeros(h, w);
    for (i, c) in coords.iter().enumerate() {
        if c.is_some() {
            mask.set(i / w, i % w, true);
        }
    }

    let mut canvas = PanoCanvas::zeros(h, channels)?;
    for c in 0..channels {
        let src = frame.plane(c);
        let dst = canvas.frame_mut().plane_mut(c);
        dst.par_iter_mut().zip(coords.par_iter()).for_each(|(d, coord)| {
            if let Some((px, py)) = coord {
                *d = sample_plane_clamped(src, side, side, *px, *py, interp);
            }
        });
    }
    Ok(ProjectionResult { canvas, mask })
}

/// The binary footprint of a pose's frustum on an `h` x `2h` canvas.
pub fn frustum_mask(pose: &CameraPose, h: usize) -> Result<MaskFrame> {
    if h < 2 {
        return Err(Error::invalid("canvas height must be at least 2"));
    }
    let w = 2 * h;
    let trig = PoseTrig::new(pose);
    // The view side is irrelevant for containment; 2 is the smallest valid.
    let coords = frustum_coords(&trig, h, 2);
    let mut mask = MaskFrame::zeros(h, w);
    for (i, c) in coords.iter().enumerate() {
        if c.is_some() {
            mask.set(i / w, i % w, true);
        }
    }
    Ok(mask)
}

/// Per canvas pixel: fractional view pixel coordinates, or `None` outside the
/// frustum. The yaw offset is applied in column units before scaling to
/// radians so grid-aligned yaws shift the result exactly.
fn frustum_coords(trig: &PoseTrig, h: usize, side: usize) -> Vec<Option<(f64, f64)>> {
    let w = 2 * h;
    let step = TAU / w as f64;
    let col_offset = trig.yaw / TAU * w as f64;
    let col_trig: Vec<(f64, f64)> = (0..w)
        .map(|u| (((u as f64 + 0.5) - col_offset) * step - PI).sin_cos())
        .collect();
    let row_trig: Vec<(f64, f64)> = (0..h)
        .map(|v| (PI / 2.0 - (v as f64 + 0.5) / h as f64 * PI).sin_cos())
        .collect();

    (0..h)
        .into_par_iter()
        .flat_map_iter(|v| {
            let (sp, cp) = row_trig[v];
            let col_trig = &col_trig;
            let trig = *trig;
            (0..w).map(move |u| {
                let (sr, cr) = col_trig[u];
                trig.tangent(sp, cp, sr, cr)
                    .map(|(a, b)| trig.tangent_to_pixel(a, b, side))
            })
        })
        .collect()
}

/// Apply per-frame P2E over a trajectory, stacking frame masks into a
/// [`VideoMask`].
pub fn build_video_projection(
    anchor: &[FrameBuf],
    traj: &PoseTrajectory,
    h: usize,
) -> Result<(Vec<PanoCanvas>, VideoMask)> {
    if anchor.len() != traj.len() {
        return Err(Error::LengthMismatch {
            anchor: anchor.len(),
            trajectory: traj.len(),
        });
    }
    let results: Vec<ProjectionResult> = anchor
        .par_iter()
        .zip(traj.frames().par_iter())
        .map(|(frame, pose)| p2e_with(frame, pose, h, Interp::Bilinear))
        .collect::<Result<_>>()?;
    let mut canvases = Vec::with_capacity(results.len());
    let mut masks = Vec::with_capacity(results.len());
    for r in results {
        canvases.push(r.canvas);
        masks.push(r.mask);
    }
    let vmask = VideoMask::new(masks, traj.clone())?;
    Ok((canvases, vmask))
}

/// Pad a frame with `pad` circularly wrapped columns on each side.
pub fn circular_pad(frame: &FrameBuf, pad: usize) -> Result<FrameBuf> {
    let (h, w, channels) = (frame.height(), frame.width(), frame.channels());
    if pad > w {
        return Err(Error::invalid(format!("pad {pad} exceeds frame width {w}")));
    }
    let mut out = FrameBuf::zeros(h, w + 2 * pad, channels);
    for c in 0..channels {
        let src = frame.plane(c);
        let dst = out.plane_mut(c);
        let ow = w + 2 * pad;
        for y in 0..h {
            let srow = &src[y * w..(y + 1) * w];
            let drow = &mut dst[y * ow..(y + 1) * ow];
            drow[..pad].copy_from_slice(&srow[w - pad..]);
            drow[pad..pad + w].copy_from_slice(srow);
            drow[pad + w..].copy_from_slice(&srow[..pad]);
        }
    }
    Ok(out)
}

/// Remove `pad` columns from each side; exact inverse of [`circular_pad`].
pub fn circular_unpad(frame: &FrameBuf, pad: usize) -> Result<FrameBuf> {
    let (h, w, channels) = (frame.height(), frame.width(), frame.channels());
    if w < 2 * pad + 1 {
        return Err(Error::invalid(format!(
            "width {w} too small to unpad by {pad}"
        )));
    }
    let nw = w - 2 * pad;
    let mut out = FrameBuf::zeros(h, nw, channels);
    for c in 0..channels {
        let src = frame.plane(c);
        let dst = out.plane_mut(c);
        for y in 0..h {
            dst[y * nw..(y + 1) * nw].copy_from_slice(&src[y * w + pad..y * w + pad + nw]);
        }
    }
    Ok(out)
}

/// Seam continuity score: the mean absolute jump across the wrap seam
/// divided by the mean absolute difference of adjacent interior columns.
///
/// Roughly 1 for content continuous around the loop, much larger for a hard
/// seam. Returns 0 when both seam and interior are flat, and infinity for a
/// seam jump over a perfectly flat interior.
pub fn seam_score(canvas: &PanoCanvas) -> f64 {
    let (h, w, channels) = (canvas.height(), canvas.width(), canvas.channels());
    let mut seam_sum = 0.0f64;
    let mut interior_sum = 0.0f64;
    for c in 0..channels {
        let plane = canvas.frame().plane(c);
        for y in 0..h {
            let row = &plane[y * w..(y + 1) * w];
            seam_sum += (row[w - 1] as f64 - row[0] as f64).abs();
            for x in 0..w - 1 {
                interior_sum += (row[x + 1] as f64 - row[x] as f64).abs();
            }
        }
    }
    let seam = seam_sum / (h * channels) as f64;
    let interior = interior_sum / ((w - 1) * h * channels) as f64;
    if interior == 0.0 {
        if seam == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        seam / interior
    }
}

/// Fraction of the sphere covered by a canvas mask, weighting each row by
/// `cos(pitch)` to undo the equirectangular area stretch.
pub fn cos_weighted_fraction(mask: &MaskFrame) -> f64 {
    let (h, w) = (mask.height(), mask.width());
    let mut covered = 0.0f64;
    let mut total = 0.0f64;
    for v in 0..h {
        let weight = (PI / 2.0 - (v as f64 + 0.5) / h as f64 * PI).cos();
        total += weight * w as f64;
        for u in 0..w {
            if mask.get(v, u) {
                covered += weight;
            }
        }
    }
    covered / total
}

/// Round-trip fidelity: P2E the view onto an `h`-row canvas, E2P it back, and
/// report the PSNR (peak 1.0) against the original view over pixels whose
/// canvas footprint survives eroding the mask by `erode_px`.
pub fn roundtrip_psnr(view: &PerspView, h: usize, erode_px: usize) -> Result<f64> {
    let projected = p2e(view, h)?;
    let back = e2p(&projected.canvas, view.pose(), view.side())?;
    let eroded = projected.mask.erode(erode_px);
    let (side, channels) = (view.side(), view.channels());
    let (ch, cw) = (projected.canvas.height(), projected.canvas.width());

    let mut se = 0.0f64;
    let mut n = 0usize;
    for py in 0..side {
        for px in 0..side {
            let dir = view_pixel_dir(view.pose(), px as f64, py as f64, side);
            let (u, v) = dir_to_pixel(dir, ch, cw)?;
            let x = (u.round() as i64).rem_euclid(cw as i64) as usize;
            let y = (v.round() as i64).clamp(0, ch as i64 - 1) as usize;
            if !eroded.get(y, x) {
                continue;
            }
            for c in 0..channels {
                let d = view.frame().get(c, py, px) as f64 - back.frame().get(c, py, px) as f64;
                se += d * d;
                n += 1;
            }
        }
    }
    if n == 0 {
        return Err(Error::invalid(
            "no pixels survive the mask erosion; canvas too small for this erode radius",
        ));
    }
    let mse = se / n as f64;
    if mse == 0.0 {
        return Ok(f64::INFINITY);
    }
    Ok(10.0 * (1.0 / mse).log10())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::PanoCanvas;
    use crate::sphere::pixel_to_dir;

    fn pose(fov: f64, yaw_deg: f64, pitch_deg: f64) -> CameraPose {
        CameraPose::from_angles(fov, yaw_deg.to_radians(), pitch_deg.to_radians()).unwrap()
    }

    #[test]
    fn constant_canvas_projects_to_constant_view() {
        let mut canvas = PanoCanvas::zeros(64, 2).unwrap();
        canvas.frame_mut().data_mut().fill(0.75);
        let view = e2p(&canvas, &pose(90.0, 30.0, -20.0), 48).unwrap();
        assert!(view.frame().data().iter().all(|&v| v == 0.75));
    }

    #[test]
    fn bright_center_maps_to_view_center() {
        let h = 256;
        let mut canvas = PanoCanvas::zeros(h, 1).unwrap();
        // 2x2 block straddling the exact canvas center (theta=0, phi=0).
        for y in [h / 2 - 1, h / 2] {
            for x in [h - 1, h] {
                canvas.frame_mut().set(0, y, x, 1.0);
            }
        }
        let side = 128;
        let view = e2p(&canvas, &pose(90.0, 0.0, 0.0), side).unwrap();
        let plane = view.frame().plane(0);
        let argmax = plane
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1))
            .unwrap()
            .0;
        let (py, px) = (argmax / side, argmax % side);
        let center = (side as f64 - 1.0) / 2.0;
        assert!(
            (px as f64 - center).abs() <= 1.0 && (py as f64 - center).abs() <= 1.0,
            "argmax at ({px}, {py})"
        );
    }

    #[test]
    fn mask_fraction_matches_solid_angle() {
        // fov 90 at the horizon subtends 4*arcsin(sin^2 45) = 2pi/3 sr = 1/6.
        let mask = frustum_mask(&pose(90.0, 0.0, 0.0), 256).unwrap();
        let frac = cos_weighted_fraction(&mask);
        assert!((frac - 1.0 / 6.0).abs() < 0.01, "fraction {frac}");
    }

    #[test]
    fn mask_shift_equivariance_is_exact() {
        let h = 128;
        let m0 = frustum_mask(&pose(90.0, 0.0, 0.0), h).unwrap();
        let m90 = frustum_mask(&pose(90.0, 90.0, 0.0), h).unwrap();
        assert_eq!(m0.shift_columns(2 * h as i64 / 4), m90);
    }

    #[test]
    fn high_pitch_mask_touches_top_row() {
        let h = 128;
        let mask = frustum_mask(&pose(90.0, 0.0, 89.0), h).unwrap();
        assert!((0..2 * h).all(|u| mask.get(0, u)), "pole row fully covered");
        assert!((0..2 * h).all(|u| !mask.get(h - 1, u)));
    }

    #[test]
    fn horizon_mask_symmetric_about_midline() {
        let h = 128;
        let mask = frustum_mask(&pose(75.0, 10.0, 0.0), h).unwrap();
        for u in 0..2 * h {
            let top = (0..h).find(|&v| mask.get(v, u));
            let bottom = (0..h).rev().find(|&v| mask.get(v, u));
            match (top, bottom) {
                (Some(t), Some(b)) => {
                    let mirrored = h - 1 - b;
                    assert!(
                        (t as i64 - mirrored as i64).abs() <= 1,
                        "column {u}: top {t} vs mirrored bottom {mirrored}"
                    );
                }
                (None, None) => {}
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn e2p_p2e_round_trip_identity_on_interior() {
        // A view projected onto a generous canvas and extracted again should
        // reproduce its interior closely.
        let side = 96;
        let p = pose(90.0, 0.0, 0.0);
        let mut view = PerspView::zeros(side, 1, p).unwrap();
        for y in 0..side {
            for x in 0..side {
                let val = (0.5
                    + 0.25 * (x as f64 * 0.11).sin()
                    + 0.25 * (y as f64 * 0.07).cos()) as f32;
                view.frame_mut().set(0, y, x, val);
            }
        }
        let psnr = roundtrip_psnr(&view, 256, 2).unwrap();
        assert!(psnr >= 35.0, "psnr {psnr}");
    }

    #[test]
    fn video_projection_single_frame_reduces_to_p2e() {
        let p = pose(90.0, 0.0, 5.0);
        let mut frame = FrameBuf::zeros(32, 32, 1);
        frame.data_mut().iter_mut().enumerate().for_each(|(i, v)| {
            *v = (i % 7) as f32 / 7.0;
        });
        let traj = PoseTrajectory::new(vec![p]).unwrap();
        let (canvases, vmask) = build_video_projection(&[frame.clone()], &traj, 64).unwrap();
        let single = p2e_with(&frame, &p, 64, Interp::Bilinear).unwrap();
        assert_eq!(canvases.len(), 1);
        assert_eq!(canvases[0], single.canvas);
        assert_eq!(vmask.frames()[0], single.mask);
    }

    #[test]
    fn video_projection_constant_trajectory_gives_identical_masks() {
        let frames = vec![FrameBuf::zeros(16, 16, 1); 4];
        let traj = PoseTrajectory::from_pitch_series(80.0, &[3.0; 4]).unwrap();
        let (_, vmask) = build_video_projection(&frames, &traj, 64).unwrap();
        for m in &vmask.frames()[1..] {
            assert_eq!(m, &vmask.frames()[0]);
        }
    }

    #[test]
    fn video_projection_rising_pitch_moves_mask_up() {
        let t = 40;
        let frames = vec![FrameBuf::zeros(8, 8, 1); t];
        let pitches: Vec<f64> = (0..t).map(|i| 10.0 + 0.25 * i as f64).collect();
        let traj = PoseTrajectory::from_pitch_series(90.0, &pitches).unwrap();
        let (_, vmask) = build_video_projection(&frames, &traj, 128).unwrap();
        let centroids: Vec<f64> = vmask
            .frames()
            .iter()
            .map(|m| m.centroid_row().unwrap())
            .collect();
        for pair in centroids.windows(2) {
            assert!(pair[1] <= pair[0] + 1e-9, "centroid rose: {pair:?}");
        }
        assert!(centroids[t - 1] < centroids[0] - 1.0);
    }

    #[test]
    fn video_projection_length_mismatch() {
        let traj = PoseTrajectory::from_pitch_series(90.0, &[0.0, 1.0]).unwrap();
        let err = build_video_projection(&[FrameBuf::zeros(8, 8, 1)], &traj, 32);
        assert!(matches!(err, Err(Error::LengthMismatch { .. })));
    }

    #[test]
    fn circular_pad_examples() {
        let row = FrameBuf::from_data(1, 4, 1, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let padded = circular_pad(&row, 1).unwrap();
        assert_eq!(padded.data(), &[4.0, 1.0, 2.0, 3.0, 4.0, 1.0]);
        assert_eq!(circular_pad(&row, 0).unwrap(), row);
        assert_eq!(circular_unpad(&padded, 1).unwrap(), row);
        assert!(circular_pad(&row, 5).is_err());
        assert!(circular_unpad(&row, 2).is_err());
    }

    #[test]
    fn seam_score_flat_and_ramp() {
        let flat = PanoCanvas::zeros(8, 1).unwrap();
        assert_eq!(seam_score(&flat), 0.0);

        let h = 512;
        let w = 2 * h;
        let mut ramp = PanoCanvas::zeros(h, 1).unwrap();
        for y in 0..h {
            for x in 0..w {
                ramp.frame_mut().set(0, y, x, x as f32 / (w - 1) as f32);
            }
        }
        assert!(seam_score(&ramp) >= 10.0);
    }

    #[test]
    fn seam_score_periodic_content_near_one() {
        let h = 128;
        let w = 2 * h;
        let mut canvas = PanoCanvas::zeros(h, 1).unwrap();
        for y in 0..h {
            for x in 0..w {
                let theta = pixel_to_dir(x as f64, y as f64, h, w).unwrap().yaw();
                canvas.frame_mut().set(0, y, x, theta.sin() as f32);
            }
        }
        let score = seam_score(&canvas);
        assert!((0.5..=2.0).contains(&score), "score {score}");
    }
}
