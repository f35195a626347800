//! Spherical coordinate conventions, camera poses, and fixed view sets.
//!
//! Conventions (frozen for the whole crate):
//! - yaw `theta` is the azimuth in radians, wrapped into `[-pi, pi)`, increasing
//!   left-to-right on the equirectangular canvas;
//! - pitch `phi` is the elevation in radians in `[-pi/2, pi/2]`, `+pi/2` at the
//!   top row of the canvas;
//! - unit vectors are `(cos(phi)cos(theta), cos(phi)sin(theta), sin(phi))`, so
//!   `(1, 0, 0)` is the forward horizon and `(0, 0, 1)` the zenith;
//! - pixel coordinates are fractional with pixel-center sampling: integer `u`
//!   addresses the center of column `u`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Wrap an angle into `[-pi, pi)`.
pub fn wrap_yaw(theta: f64) -> f64 {
    let t = (theta + PI).rem_euclid(TAU) - PI;
    // rem_euclid(TAU) can return TAU itself when the argument is a tiny
    // negative number, which would map to +pi; fold that back.
    if t >= PI {
        t - TAU
    } else {
        t
    }
}

/// A direction on the unit sphere (yaw + pitch).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereDir {
    yaw: f64,
    pitch: f64,
}

impl SphereDir {
    /// Build a direction, wrapping yaw into `[-pi, pi)`.
    ///
    /// Pitch outside `[-pi/2, pi/2]` is rejected rather than wrapped.
    pub fn new(yaw: f64, pitch: f64) -> Result<Self> {
        if !pitch.is_finite() || pitch.abs() > FRAC_PI_2 {
            return Err(Error::PitchOutOfRange(pitch));
        }
        Ok(Self {
            yaw: wrap_yaw(yaw),
            pitch,
        })
    }

    pub fn yaw(&self) -> f64 {
        self.yaw
    }

    pub fn pitch(&self) -> f64 {
        self.pitch
    }

    /// The diametrically opposite direction: `(wrap(yaw + pi), -pitch)`.
    ///
    /// An involution: `d.antipode().antipode()` recovers `d` up to one ulp.
    pub fn antipode(&self) -> SphereDir {
        let yaw = if self.yaw < 0.0 {
            self.yaw + PI
        } else {
            self.yaw - PI
        };
        SphereDir {
            yaw,
            pitch: -self.pitch,
        }
    }

    /// Unit vector `(cos(phi)cos(theta), cos(phi)sin(theta), sin(phi))`.
    pub fn to_unit(&self) -> [f64; 3] {
        let (sy, cy) = self.yaw.sin_cos();
        let (sp, cp) = self.pitch.sin_cos();
        [cp * cy, cp * sy, sp]
    }

    /// Direction of a (not necessarily normalized) nonzero vector.
    pub fn from_vec(v: [f64; 3]) -> SphereDir {
        let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        let yaw = wrap_yaw(v[1].atan2(v[0]));
        let pitch = (v[2] / norm).clamp(-1.0, 1.0).asin();
        SphereDir { yaw, pitch }
    }

    /// Great-circle angle to another direction, in radians.
    pub fn angle_to(&self, other: &SphereDir) -> f64 {
        let a = self.to_unit();
        let b = other.to_unit();
        let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        dot.clamp(-1.0, 1.0).acos()
    }
}

/// Convert a fractional canvas pixel to a sphere direction (pixel centers).
///
/// `theta = (u + 0.5)/w * 2pi - pi`, `phi = pi/2 - (v + 0.5)/h * pi`.
///
/// `u` must lie in `[0, w)`; `v` in `[-0.5, h - 0.5]`, the exact interval
/// that maps onto valid pitch values (both pole rows included).
pub fn pixel_to_dir(u: f64, v: f64, h: usize, w: usize) -> Result<SphereDir> {
    check_aspect(h, w)?;
    if !(0.0..w as f64).contains(&u) || !(-0.5..=h as f64 - 0.5).contains(&v) {
        return Err(Error::PixelOutOfRange { u, v, h, w });
    }
    let yaw = (u + 0.5) / w as f64 * TAU - PI;
    let pitch = FRAC_PI_2 - (v + 0.5) / h as f64 * PI;
    SphereDir::new(yaw, pitch)
}

/// Inverse of [`pixel_to_dir`]; `u` is wrapped circularly into `[0, w)`.
pub fn dir_to_pixel(d: SphereDir, h: usize, w: usize) -> Result<(f64, f64)> {
    check_aspect(h, w)?;
    let u = ((d.yaw() + PI) / TAU * w as f64 - 0.5).rem_euclid(w as f64);
    let v = (FRAC_PI_2 - d.pitch()) / PI * h as f64 - 0.5;
    Ok((u, v))
}

pub(crate) fn check_aspect(h: usize, w: usize) -> Result<()> {
    if h == 0 || w != 2 * h {
        return Err(Error::BadAspect { h, w });
    }
    Ok(())
}

/// A square pinhole camera pose: field of view plus viewing direction.
///
/// Roll is fixed at zero; the camera up vector stays in the plane spanned by
/// the viewing direction and the world zenith.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CameraPose {
    fov_deg: f64,
    dir: SphereDir,
}

impl CameraPose {
    pub fn new(fov_deg: f64, dir: SphereDir) -> Result<Self> {
        if !fov_deg.is_finite() || fov_deg <= 0.0 || fov_deg >= 180.0 {
            return Err(Error::FovOutOfRange(fov_deg));
        }
        Ok(Self { fov_deg, dir })
    }

    pub fn from_angles(fov_deg: f64, yaw: f64, pitch: f64) -> Result<Self> {
        Self::new(fov_deg, SphereDir::new(yaw, pitch)?)
    }

    pub fn fov_deg(&self) -> f64 {
        self.fov_deg
    }

    pub fn dir(&self) -> SphereDir {
        self.dir
    }

    /// Tangent of half the field of view; the frustum half-extent on the
    /// image plane at unit depth.
    pub fn tan_half_fov(&self) -> f64 {
        (self.fov_deg.to_radians() / 2.0).tan()
    }
}

/// An ordered per-frame pose sequence sharing a single field of view.
#[derive(Debug, Clone, PartialEq)]
pub struct PoseTrajectory {
    frames: Vec<CameraPose>,
}

impl PoseTrajectory {
    pub fn new(frames: Vec<CameraPose>) -> Result<Self> {
        let first = frames
            .first()
            .ok_or_else(|| Error::invalid("trajectory must contain at least one frame"))?;
        let fov = first.fov_deg();
        for p in &frames {
            if p.fov_deg() != fov {
                return Err(Error::MixedFov {
                    first: fov,
                    other: p.fov_deg(),
                });
            }
        }
        Ok(Self { frames })
    }

    /// Constant-fov trajectory from a per-frame pitch series in degrees,
    /// yaw normalized to zero.
    pub fn from_pitch_series(fov_deg: f64, pitches_deg: &[f64]) -> Result<Self> {
        let frames = pitches_deg
            .iter()
            .map(|p| CameraPose::from_angles(fov_deg, 0.0, p.to_radians()))
            .collect::<Result<Vec<_>>>()?;
        Self::new(frames)
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn fov_deg(&self) -> f64 {
        self.frames[0].fov_deg()
    }

    pub fn frames(&self) -> &[CameraPose] {
        &self.frames
    }

    pub fn get(&self, t: usize) -> Option<&CameraPose> {
        self.frames.get(t)
    }
}

/// The 20 face-center views of a regular icosahedron.
///
/// Canonical orientation: two icosahedron vertices sit on the poles, the
/// upper vertex ring at latitude `atan(1/2)` starts at yaw 0, and the lower
/// ring is offset by `pi/5`. No face center falls on a pole. Views are
/// ordered by descending pitch, then ascending yaw, and all share `fov_deg`.
pub fn icosahedron_views(fov_deg: f64) -> Result<Vec<CameraPose>> {
    if !fov_deg.is_finite() || fov_deg <= 0.0 || fov_deg >= 180.0 {
        return Err(Error::FovOutOfRange(fov_deg));
    }

    let ring = 0.5f64.atan();
    let vert = |yaw: f64, pitch: f64| -> [f64; 3] {
        let (sy, cy) = yaw.sin_cos();
        let (sp, cp) = pitch.sin_cos();
        [cp * cy, cp * sy, sp]
    };

    let north = [0.0, 0.0, 1.0];
    let south = [0.0, 0.0, -1.0];
    let upper: Vec<[f64; 3]> = (0..5).map(|k| vert(k as f64 * TAU / 5.0, ring)).collect();
    let lower: Vec<[f64; 3]> = (0..5)
        .map(|k| vert(k as f64 * TAU / 5.0 + TAU / 10.0, -ring))
        .collect();

    let mut centers: Vec<SphereDir> = Vec::with_capacity(20);
    let mut push_face = |a: [f64; 3], b: [f64; 3], c: [f64; 3]| {
        centers.push(SphereDir::from_vec([
            a[0] + b[0] + c[0],
            a[1] + b[1] + c[1],
            a[2] + b[2] + c[2],
        ]));
    };
    for k in 0..5 {
        let k1 = (k + 1) % 5;
        push_face(north, upper[k], upper[k1]);
        push_face(upper[k], lower[k], upper[k1]);
        push_face(upper[k1], lower[k], lower[k1]);
        push_face(south, lower[k], lower[k1]);
    }

    // Ring pitches are equal up to rounding noise; quantize before ordering
    // so faces group by ring, then sort each ring by yaw.
    let key = |d: &SphereDir| ((d.pitch() * 1e9).round() as i64, d.yaw());
    centers.sort_by(|a, b| {
        let (pa, ya) = key(a);
        let (pb, yb) = key(b);
        pb.cmp(&pa).then(ya.total_cmp(&yb))
    });

    centers
        .into_iter()
        .map(|dir| CameraPose::new(fov_deg, dir))
        .collect()
}

/// Default field of view for the icosahedron view set.
///
/// A face's angular circumradius is about 37.38 deg, so any fov of at least
/// ~74.8 deg covers the sphere; 80 leaves overlap margin.
pub const ICOSAHEDRON_DEFAULT_FOV_DEG: f64 = 80.0;

/// The four fixed evaluation views: fov 90, pitch 0, yaw 0/90/180/270 deg.
pub fn eval_views() -> [CameraPose; 4] {
    let pose = |yaw_deg: f64| {
        CameraPose::from_angles(90.0, (yaw_deg).to_radians(), 0.0)
            .expect("fixed evaluation pose is valid")
    };
    [pose(0.0), pose(90.0), pose(180.0), pose(270.0)]
}

#[derive(Serialize, Deserialize)]
struct PoseRecord {
    fov_deg: f64,
    #[serde(alias = "theta")]
    yaw_deg: f64,
    pitch_deg: f64,
}

/// Load a pose trajectory from a JSON array of
/// `{fov_deg, yaw_deg, pitch_deg}` objects (`theta` accepted for `yaw_deg`).
/// Angles are degrees in files, radians in memory.
pub fn load_trajectory(path: &Path) -> Result<PoseTrajectory> {
    let text = std::fs::read_to_string(path)?;
    let records: Vec<PoseRecord> = serde_json::from_str(&text)?;
    let frames = records
        .iter()
        .map(|r| CameraPose::from_angles(r.fov_deg, r.yaw_deg.to_radians(), r.pitch_deg.to_radians()))
        .collect::<Result<Vec<_>>>()?;
    PoseTrajectory::new(frames)
}

/// Write a pose trajectory as the JSON array format read by [`load_trajectory`].
pub fn save_trajectory(traj: &PoseTrajectory, path: &Path) -> Result<()> {
    let records: Vec<PoseRecord> = traj
        .frames()
        .iter()
        .map(|p| PoseRecord {
            fov_deg: p.fov_deg(),
            yaw_deg: p.dir().yaw().to_degrees(),
            pitch_deg: p.dir().pitch().to_degrees(),
        })
        .collect();
    let mut text = serde_json::to_string_pretty(&records)?;
    text.push('\n');
    std::fs::write(path, text)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    const H: usize = 256;
    const W: usize = 512;

    #[test]
    fn canvas_center_is_forward_horizon() {
        let d = pixel_to_dir(W as f64 / 2.0 - 0.5, H as f64 / 2.0 - 0.5, H, W).unwrap();
        assert!(d.yaw().abs() < 1e-12);
        assert!(d.pitch().abs() < 1e-12);
    }

    #[test]
    fn corner_pixel_center() {
        let d = pixel_to_dir(0.0, 0.0, H, W).unwrap();
        assert!((d.yaw() - (-PI + PI / 512.0)).abs() < 1e-12);
        assert!((d.pitch() - (FRAC_PI_2 - PI / 512.0)).abs() < 1e-12);
    }

    #[test]
    fn negative_u_rejected() {
        assert!(pixel_to_dir(-0.5, 0.0, H, W).is_err());
        assert!(pixel_to_dir(0.0, H as f64 - 0.25, H, W).is_err());
        assert!(pixel_to_dir(0.0, 0.0, H, W + 1).is_err());
    }

    #[test]
    fn dir_to_pixel_center_and_seam() {
        let (u, v) = dir_to_pixel(SphereDir::new(0.0, 0.0).unwrap(), H, W).unwrap();
        assert!((u - (W as f64 / 2.0 - 0.5)).abs() < 1e-9);
        assert!((v - (H as f64 / 2.0 - 0.5)).abs() < 1e-9);

        // Seam column: theta = -pi wraps -0.5 to w - 0.5.
        let (u, _) = dir_to_pixel(SphereDir::new(-PI, 0.0).unwrap(), H, W).unwrap();
        assert!((u - (W as f64 - 0.5)).abs() < 1e-9);
    }

    #[test]
    fn pixel_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..10_000 {
            let u = rng.random_range(0.0..W as f64);
            let v = rng.random_range(0.0..=(H as f64 - 0.5));
            let d = pixel_to_dir(u, v, H, W).unwrap();
            let (u2, v2) = dir_to_pixel(d, H, W).unwrap();
            assert!((u - u2).abs() < 1e-9, "u {u} -> {u2}");
            assert!((v - v2).abs() < 1e-9, "v {v} -> {v2}");
        }
    }

    #[test]
    fn dir_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        for _ in 0..10_000 {
            let d = SphereDir::new(
                rng.random_range(-PI..PI),
                rng.random_range(-FRAC_PI_2..=FRAC_PI_2),
            )
            .unwrap();
            let (u, v) = dir_to_pixel(d, H, W).unwrap();
            let d2 = pixel_to_dir(u, v, H, W).unwrap();
            assert!((d.yaw() - d2.yaw()).abs() < 1e-9);
            assert!((d.pitch() - d2.pitch()).abs() < 1e-9);
        }
    }

    #[test]
    fn antipode_basics() {
        let a = SphereDir::new(0.0, 0.0).unwrap().antipode();
        assert_eq!(a.yaw(), -PI);
        assert_eq!(a.pitch(), 0.0);

        let b = SphereDir::new(FRAC_PI_2, PI / 6.0).unwrap().antipode();
        assert!((b.yaw() + FRAC_PI_2).abs() < 1e-15);
        assert!((b.pitch() + PI / 6.0).abs() < 1e-15);
    }

    #[test]
    fn antipode_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..10_000 {
            let d = SphereDir::new(
                rng.random_range(-PI..PI),
                rng.random_range(-FRAC_PI_2..=FRAC_PI_2),
            )
            .unwrap();
            let dd = d.antipode().antipode();
            assert!((d.yaw() - dd.yaw()).abs() < 1e-12);
            assert_eq!(d.pitch(), dd.pitch());
            // |pitch| never changes under a single antipode.
            assert_eq!(d.antipode().pitch().abs(), d.pitch().abs());
        }
    }

    #[test]
    fn icosahedron_count_and_symmetry() {
        let views = icosahedron_views(80.0).unwrap();
        assert_eq!(views.len(), 20);

        // Minimum pairwise angle is pi minus the dihedral angle: arccos(sqrt(5)/3).
        let expected = (5.0f64.sqrt() / 3.0).acos();
        let mut min_angle = f64::MAX;
        let mut centroid = [0.0f64; 3];
        for (i, a) in views.iter().enumerate() {
            let u = a.dir().to_unit();
            for (c, x) in centroid.iter_mut().zip(u) {
                *c += x;
            }
            for b in views.iter().skip(i + 1) {
                min_angle = min_angle.min(a.dir().angle_to(&b.dir()));
            }
        }
        assert!(
            (min_angle - expected).abs() < 0.01f64.to_radians(),
            "min pairwise angle {} deg",
            min_angle.to_degrees()
        );
        let norm = (centroid[0].powi(2) + centroid[1].powi(2) + centroid[2].powi(2)).sqrt();
        assert!(norm < 1e-9, "centroid norm {norm}");

        // No face center on a pole, ordering by descending pitch then ascending yaw.
        for w in views.windows(2) {
            let (a, b) = (w[0].dir(), w[1].dir());
            assert!(a.pitch().abs() < FRAC_PI_2 - 0.1);
            assert!(a.pitch() > b.pitch() - 1e-9);
            if (a.pitch() - b.pitch()).abs() < 1e-9 {
                assert!(a.yaw() < b.yaw());
            }
        }
    }

    #[test]
    fn icosahedron_rejects_bad_fov() {
        assert!(icosahedron_views(0.0).is_err());
        assert!(icosahedron_views(180.0).is_err());
    }

    #[test]
    fn eval_views_fixed_poses() {
        let views = eval_views();
        assert_eq!(views.len(), 4);
        assert_eq!(views[0].fov_deg(), 90.0);
        assert_eq!(views[0].dir().yaw(), 0.0);
        // 180 deg wraps to the -pi representative of the same angle.
        assert_eq!(views[2].dir().yaw().to_degrees().abs(), 180.0);
        for (v, want_deg) in views.iter().zip([0.0, 90.0, 180.0, 270.0]) {
            assert_eq!(v.dir().pitch(), 0.0);
            assert_eq!(v.fov_deg(), 90.0);
            let got = v.dir().yaw().to_degrees().rem_euclid(360.0);
            assert!((got - want_deg).abs() < 1e-9, "yaw {got} want {want_deg}");
        }
        // Bit-stable across calls.
        let again = eval_views();
        for (a, b) in views.iter().zip(again.iter()) {
            assert_eq!(a.dir().yaw().to_bits(), b.dir().yaw().to_bits());
            assert_eq!(a.dir().pitch().to_bits(), b.dir().pitch().to_bits());
        }
    }

    #[test]
    fn trajectory_requires_uniform_fov() {
        let a = CameraPose::from_angles(90.0, 0.0, 0.0).unwrap();
        let b = CameraPose::from_angles(80.0, 0.0, 0.0).unwrap();
        assert!(PoseTrajectory::new(vec![a, b]).is_err());
        assert!(PoseTrajectory::new(vec![]).is_err());
        assert_eq!(PoseTrajectory::new(vec![a, a]).unwrap().len(), 2);
    }

    #[test]
    fn trajectory_file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("traj.json");
        let traj = PoseTrajectory::from_pitch_series(75.0, &[0.0, 1.5, 3.0]).unwrap();
        save_trajectory(&traj, &path).unwrap();
        let back = load_trajectory(&path).unwrap();
        assert_eq!(back.len(), 3);
        assert_eq!(back.fov_deg(), 75.0);
        for (a, b) in traj.frames().iter().zip(back.frames()) {
            assert!((a.dir().pitch() - b.dir().pitch()).abs() < 1e-12);
        }
    }

    #[test]
    fn trajectory_file_accepts_theta_alias() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("traj.json");
        std::fs::write(
            &path,
            r#"[{"fov_deg": 90.0, "theta": 45.0, "pitch_deg": -5.0}]"#,
        )
        .unwrap();
        let traj = load_trajectory(&path).unwrap();
        assert!((traj.frames()[0].dir().yaw().to_degrees() - 45.0).abs() < 1e-12);
        assert!((traj.frames()[0].dir().pitch().to_degrees() + 5.0).abs() < 1e-12);
    }
}
