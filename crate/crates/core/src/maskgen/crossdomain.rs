//! Cross-domain spherical attention mask: sparse activation triples linking
//! panorama pixels to their directly-mapped and antipodally-mapped pixels in
//! a set of perspective views.
//!
//! Each pano pixel contributes one peak per view containing it (and one per
//! view containing its antipode when enabled); peaks are spread over the view
//! grid by a truncated Gaussian whose center keeps the pre-blur weight. The
//! view-to-pano direction is the same triple set read transposed, so the
//! bipartite relation is symmetric by construction.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::resample::{project_into_view, view_pixel_dir};
use crate::sphere::{pixel_to_dir, CameraPose, SphereDir};

pub const DEFAULT_SIGMA: f64 = 1.0;
pub const DEFAULT_ANTIPODAL_WEIGHT: f64 = 1.0;
pub const DEFAULT_DROP_THRESHOLD: f64 = 1e-3;
pub const DEFAULT_LAMBDA_DIRECT: f64 = 1.0;
pub const DEFAULT_LAMBDA_ANTIPODAL: f64 = 1.0;

const MAGIC: &[u8; 4] = b"XDM1";
const FORMAT_VERSION: u32 = 1;

/// How a triple links its pano and view pixels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum TripleTag {
    Direct = 0,
    Antipodal = 1,
}

impl TripleTag {
    fn from_byte(b: u8) -> Result<Self> {
        match b {
            0 => Ok(TripleTag::Direct),
            1 => Ok(TripleTag::Antipodal),
            other => Err(Error::format("attention mask", format!("bad tag byte {other}"))),
        }
    }
}

/// One activation: pano pixel index, view pixel index, tag, and weight in
/// `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaskTriple {
    pub pano_idx: u32,
    pub view_idx: u32,
    pub tag: TripleTag,
    pub weight: f32,
}

/// Knobs for [`CrossDomainMask::build_with`].
#[derive(Debug, Clone, Copy)]
pub struct CrossDomainParams {
    /// Gaussian blur radius in view pixels; 0 disables the spread.
    pub sigma: f64,
    pub include_antipodal: bool,
    /// Peak weight of antipodal activations, in `(0, 1]`.
    pub antipodal_weight: f64,
    /// Blurred weights below this are dropped to bound the sparse size.
    pub drop_threshold: f64,
    /// View grid side; defaults to `canvas_h / 2`.
    pub view_side: Option<usize>,
}

impl Default for CrossDomainParams {
    fn default() -> Self {
        Self {
            sigma: DEFAULT_SIGMA,
            include_antipodal: true,
            antipodal_weight: DEFAULT_ANTIPODAL_WEIGHT,
            drop_threshold: DEFAULT_DROP_THRESHOLD,
            view_side: None,
        }
    }
}

/// The sparse pano <-> view activation map for one latent frame.
#[derive(Debug, Clone, PartialEq)]
pub struct CrossDomainMask {
    canvas_h: usize,
    canvas_w: usize,
    view_side: usize,
    sigma: f64,
    views: Vec<CameraPose>,
    /// Per view, sorted by (pano_idx, view_idx, tag).
    triples: Vec<Vec<MaskTriple>>,
}

/// Build with default blur/weight parameters; see [`CrossDomainMask::build_with`].
pub fn build_cross_domain_mask(
    h: usize,
    views: &[CameraPose],
    sigma: f64,
    include_antipodal: bool,
) -> Result<CrossDomainMask> {
    CrossDomainMask::build_with(
        h,
        views,
        CrossDomainParams {
            sigma,
            include_antipodal,
            ..CrossDomainParams::default()
        },
    )
}

impl CrossDomainMask {
    pub fn build_with(
        h: usize,
        views: &[CameraPose],
        params: CrossDomainParams,
    ) -> Result<CrossDomainMask> {
        if h < 4 {
            return Err(Error::invalid("canvas height must be at least 4"));
        }
        if views.is_empty() {
            return Err(Error::invalid("need at least one view"));
        }
        if !params.sigma.is_finite() || params.sigma < 0.0 {
            return Err(Error::invalid("sigma must be non-negative"));
        }
        if !(0.0 < params.antipodal_weight && params.antipodal_weight <= 1.0) {
            return Err(Error::invalid("antipodal weight must be in (0, 1]"));
        }
        let side = params.view_side.unwrap_or(h / 2);
        if side < 2 {
            return Err(Error::invalid("view side must be at least 2"));
        }
        let w = 2 * h;

        // Pano pixel directions and their antipodes, shared across views.
        let dirs: Vec<(SphereDir, SphereDir)> = (0..h * w)
            .map(|idx| {
                let dir = pixel_to_dir((idx % w) as f64, (idx / w) as f64, h, w)
                    .expect("integer pixel centers are valid");
                (dir, dir.antipode())
            })
            .collect();

        let kernel = GaussKernel::new(params.sigma);

        let triples: Vec<Vec<MaskTriple>> = views
            .par_iter()
            .map(|pose| {
                let mut out = Vec::new();
                for (idx, (dir, anti)) in dirs.iter().enumerate() {
                    if let Some((px, py)) = project_into_view(pose, dir, side) {
                        kernel.splat(
                            &mut out,
                            idx as u32,
                            px,
                            py,
                            side,
                            1.0,
                            TripleTag::Direct,
                            params.drop_threshold,
                        );
                    }
                    if params.include_antipodal {
                        if let Some((px, py)) = project_into_view(pose, anti, side) {
                            kernel.splat(
                                &mut out,
                                idx as u32,
                                px,
                                py,
                                side,
                                params.antipodal_weight,
                                TripleTag::Antipodal,
                                params.drop_threshold,
                            );
                        }
                    }
                }
                out.sort_by_key(|t| (t.pano_idx, t.view_idx, t.tag));
                out
            })
            .collect();

        Ok(CrossDomainMask {
            canvas_h: h,
            canvas_w: w,
            view_side: side,
            sigma: params.sigma,
            views: views.to_vec(),
            triples,
        })
    }

    /// Assemble a mask from raw parts (used by the file loader and tests).
    pub fn from_parts(
        canvas_h: usize,
        view_side: usize,
        sigma: f64,
        views: Vec<CameraPose>,
        mut triples: Vec<Vec<MaskTriple>>,
    ) -> Result<CrossDomainMask> {
        let canvas_w = 2 * canvas_h;
        if triples.len() != views.len() {
            return Err(Error::invalid("one triple list per view required"));
        }
        for list in &mut triples {
            for t in list.iter() {
                if t.pano_idx as usize >= canvas_h * canvas_w {
                    return Err(Error::invalid(format!("pano index {} out of range", t.pano_idx)));
                }
                if t.view_idx as usize >= view_side * view_side {
                    return Err(Error::invalid(format!("view index {} out of range", t.view_idx)));
                }
                if !(t.weight > 0.0 && t.weight <= 1.0) {
                    return Err(Error::invalid(format!("weight {} outside (0, 1]", t.weight)));
                }
            }
            list.sort_by_key(|t| (t.pano_idx, t.view_idx, t.tag));
        }
        Ok(CrossDomainMask {
            canvas_h,
            canvas_w,
            view_side,
            sigma,
            views,
            triples,
        })
    }

    pub fn canvas_h(&self) -> usize {
        self.canvas_h
    }

    pub fn canvas_w(&self) -> usize {
        self.canvas_w
    }

    pub fn view_side(&self) -> usize {
        self.view_side
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn views(&self) -> &[CameraPose] {
        &self.views
    }

    /// Pano-to-view triples of one view, sorted by (pano_idx, view_idx, tag).
    pub fn triples(&self, view: usize) -> &[MaskTriple] {
        &self.triples[view]
    }

    pub fn total_triples(&self) -> usize {
        self.triples.iter().map(Vec::len).sum()
    }

    pub fn count_tag(&self, tag: TripleTag) -> usize {
        self.triples
            .iter()
            .flat_map(|v| v.iter())
            .filter(|t| t.tag == tag)
            .count()
    }

    /// The view-to-pano direction: the same triples keyed by view pixel.
    pub fn reverse_triples(&self, view: usize) -> Vec<MaskTriple> {
        let mut rev: Vec<MaskTriple> = self.triples[view].clone();
        rev.sort_by_key(|t| (t.view_idx, t.pano_idx, t.tag));
        rev
    }

    /// Write the sorted triple list in the little-endian binary format.
    pub fn write_binary<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(MAGIC)?;
        out.write_all(&FORMAT_VERSION.to_le_bytes())?;
        out.write_all(&(self.canvas_h as u32).to_le_bytes())?;
        out.write_all(&(self.canvas_w as u32).to_le_bytes())?;
        out.write_all(&(self.view_side as u32).to_le_bytes())?;
        out.write_all(&(self.views.len() as u32).to_le_bytes())?;
        out.write_all(&(self.total_triples() as u64).to_le_bytes())?;
        for (view, list) in self.triples.iter().enumerate() {
            for t in list {
                out.write_all(&0u32.to_le_bytes())?; // frame; geometry is frame-invariant
                out.write_all(&(view as u16).to_le_bytes())?;
                out.write_all(&t.pano_idx.to_le_bytes())?;
                out.write_all(&t.view_idx.to_le_bytes())?;
                out.write_all(&[t.tag as u8])?;
                out.write_all(&t.weight.to_le_bytes())?;
            }
        }
        Ok(())
    }

    /// Save the binary triples plus the JSON sidecar describing geometry and
    /// default attention scales.
    pub fn save(&self, binary: &Path, sidecar: &Path) -> Result<()> {
        let mut file = std::io::BufWriter::new(std::fs::File::create(binary)?);
        self.write_binary(&mut file)?;
        let side = CrossDomainSidecar {
            h: self.canvas_h,
            w: self.canvas_w,
            view_side: self.view_side,
            sigma: self.sigma,
            lambda_direct: DEFAULT_LAMBDA_DIRECT,
            lambda_antipodal: DEFAULT_LAMBDA_ANTIPODAL,
            views: self.views.iter().map(ViewPose::from).collect(),
        };
        let mut text = serde_json::to_string_pretty(&side)?;
        text.push('\n');
        std::fs::write(sidecar, text)?;
        Ok(())
    }

    /// Load a mask saved by [`CrossDomainMask::save`].
    pub fn load(binary: &Path, sidecar: &Path) -> Result<CrossDomainMask> {
        let sc: CrossDomainSidecar = serde_json::from_str(&std::fs::read_to_string(sidecar)?)?;
        let views = sc
            .views
            .iter()
            .map(ViewPose::to_pose)
            .collect::<Result<Vec<_>>>()?;

        let mut file = std::io::BufReader::new(std::fs::File::open(binary)?);
        let mut magic = [0u8; 4];
        file.read_exact(&mut magic)?;
        if &magic != MAGIC {
            return Err(Error::format("attention mask", "bad magic"));
        }
        let version = read_u32(&mut file)?;
        if version != FORMAT_VERSION {
            return Err(Error::format(
                "attention mask",
                format!("unsupported version {version}"),
            ));
        }
        let h = read_u32(&mut file)? as usize;
        let w = read_u32(&mut file)? as usize;
        let side = read_u32(&mut file)? as usize;
        let view_count = read_u32(&mut file)? as usize;
        let count = read_u64(&mut file)?;
        if h != sc.h || w != sc.w || side != sc.view_side || view_count != sc.views.len() {
            return Err(Error::format(
                "attention mask",
                "binary header disagrees with sidecar",
            ));
        }

        let mut triples = vec![Vec::new(); view_count];
        for _ in 0..count {
            let _frame = read_u32(&mut file)?;
            let view = read_u16(&mut file)? as usize;
            let pano_idx = read_u32(&mut file)?;
            let view_idx = read_u32(&mut file)?;
            let mut tag = [0u8; 1];
            file.read_exact(&mut tag)?;
            let weight = f32::from_le_bytes(read_array(&mut file)?);
            if view >= view_count {
                return Err(Error::format("attention mask", "view index out of range"));
            }
            triples[view].push(MaskTriple {
                pano_idx,
                view_idx,
                tag: TripleTag::from_byte(tag[0])?,
                weight,
            });
        }
        CrossDomainMask::from_parts(h, side, sc.sigma, views, triples)
    }
}

fn read_array<R: Read, const N: usize>(r: &mut R) -> Result<[u8; N]> {
    let mut buf = [0u8; N];
    r.read_exact(&mut buf)?;
    Ok(buf)
}

fn read_u16<R: Read>(r: &mut R) -> Result<u16> {
    Ok(u16::from_le_bytes(read_array(r)?))
}

fn read_u32<R: Read>(r: &mut R) -> Result<u32> {
    Ok(u32::from_le_bytes(read_array(r)?))
}

fn read_u64<R: Read>(r: &mut R) -> Result<u64> {
    Ok(u64::from_le_bytes(read_array(r)?))
}

/// JSON sidecar stored next to the binary triples.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CrossDomainSidecar {
    pub h: usize,
    pub w: usize,
    pub view_side: usize,
    pub sigma: f64,
    pub lambda_direct: f64,
    pub lambda_antipodal: f64,
    pub views: Vec<ViewPose>,
}

/// A camera pose in the degree-based file representation.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ViewPose {
    pub fov_deg: f64,
    pub yaw_deg: f64,
    pub pitch_deg: f64,
}

impl ViewPose {
    pub fn to_pose(&self) -> Result<CameraPose> {
        CameraPose::from_angles(
            self.fov_deg,
            self.yaw_deg.to_radians(),
            self.pitch_deg.to_radians(),
        )
    }
}

impl From<&CameraPose> for ViewPose {
    fn from(p: &CameraPose) -> Self {
        ViewPose {
            fov_deg: p.fov_deg(),
            yaw_deg: p.dir().yaw().to_degrees(),
            pitch_deg: p.dir().pitch().to_degrees(),
        }
    }
}

struct GaussKernel {
    radius: i64,
    /// exp(-(dx^2+dy^2) / (2 sigma^2)) on the (2r+1)^2 window; peak is 1.
    weights: Vec<f64>,
}

impl GaussKernel {
    fn new(sigma: f64) -> Self {
        if sigma == 0.0 {
            return Self {
                radius: 0,
                weights: vec![1.0],
            };
        }
        let radius = (3.0 * sigma).ceil() as i64;
        let span = (2 * radius + 1) as usize;
        let mut weights = Vec::with_capacity(span * span);
        for dy in -radius..=radius {
            for dx in -radius..=radius {
                let d2 = (dx * dx + dy * dy) as f64;
                weights.push((-d2 / (2.0 * sigma * sigma)).exp());
            }
        }
        Self { radius, weights }
    }

    #[allow(clippy::too_many_arguments)]
    fn splat(
        &self,
        out: &mut Vec<MaskTriple>,
        pano_idx: u32,
        px: f64,
        py: f64,
        side: usize,
        peak: f64,
        tag: TripleTag,
        drop: f64,
    ) {
        let cx = px.round() as i64;
        let cy = py.round() as i64;
        let span = 2 * self.radius + 1;
        for dy in -self.radius..=self.radius {
            let ny = cy + dy;
            if ny < 0 || ny >= side as i64 {
                continue;
            }
            for dx in -self.radius..=self.radius {
                let nx = cx + dx;
                if nx < 0 || nx >= side as i64 {
                    continue;
                }
                let k = self.weights[((dy + self.radius) * span + (dx + self.radius)) as usize];
                let weight = peak * k;
                if weight < drop {
                    continue;
                }
                out.push(MaskTriple {
                    pano_idx,
                    view_idx: (ny * side as i64 + nx) as u32,
                    tag,
                    weight: weight as f32,
                });
            }
        }
    }
}

/// Dense attention bias for one view: `rows` pano tokens by `cols` view
/// tokens, intended to be added to attention logits before normalization.
#[derive(Debug, Clone, PartialEq)]
pub struct BiasMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f32>,
}

impl BiasMatrix {
    pub fn get(&self, row: usize, col: usize) -> f32 {
        self.data[row * self.cols + col]
    }
}

/// Materialize the bias matrix of one view:
/// `bias[q, k] = lambda_direct * w_direct + lambda_antipodal * w_antipodal`.
pub fn attention_bias(
    mask: &CrossDomainMask,
    view: usize,
    lambda_direct: f64,
    lambda_antipodal: f64,
) -> Result<BiasMatrix> {
    if !lambda_direct.is_finite() || !lambda_antipodal.is_finite() {
        return Err(Error::invalid("lambda values must be finite"));
    }
    if view >= mask.views().len() {
        return Err(Error::invalid(format!("view {view} out of range")));
    }
    let rows = mask.canvas_h() * mask.canvas_w();
    let cols = mask.view_side() * mask.view_side();
    let mut data = vec![0.0f32; rows * cols];
    for t in mask.triples(view) {
        let scale = match t.tag {
            TripleTag::Direct => lambda_direct,
            TripleTag::Antipodal => lambda_antipodal,
        };
        data[t.pano_idx as usize * cols + t.view_idx as usize] += (scale * t.weight as f64) as f32;
    }
    Ok(BiasMatrix { rows, cols, data })
}

/// Result of checking every activation against the projection geometry.
#[derive(Debug, Clone, Serialize)]
pub struct ConsistencyReport {
    pub direct_groups: usize,
    pub antipodal_groups: usize,
    /// Distance in view pixels between each group's peak activation and the
    /// geometric landing pixel of the pano direction (or its antipode).
    pub max_direct_err_px: f64,
    pub max_antipodal_err_px: f64,
    pub transpose_symmetric: bool,
}

impl ConsistencyReport {
    pub fn passes(&self) -> bool {
        self.max_direct_err_px <= 1.0 && self.max_antipodal_err_px <= 1.0 && self.transpose_symmetric
    }
}

/// Re-project every (pano pixel, view, tag) group's maximum-weight triple and
/// measure how far it lands from the recorded view pixel; also confirm the
/// pano->view and view->pano readings carry identical triples.
pub fn validate_geometry(mask: &CrossDomainMask) -> Result<ConsistencyReport> {
    let (h, w, side) = (mask.canvas_h(), mask.canvas_w(), mask.view_side());
    let mut report = ConsistencyReport {
        direct_groups: 0,
        antipodal_groups: 0,
        max_direct_err_px: 0.0,
        max_antipodal_err_px: 0.0,
        transpose_symmetric: true,
    };

    for (vi, pose) in mask.views().iter().enumerate() {
        // Peak triple per (pano pixel, tag).
        let mut peaks: HashMap<(u32, TripleTag), MaskTriple> = HashMap::new();
        for t in mask.triples(vi) {
            peaks
                .entry((t.pano_idx, t.tag))
                .and_modify(|cur| {
                    if t.weight > cur.weight {
                        *cur = *t;
                    }
                })
                .or_insert(*t);
        }

        for ((pano_idx, tag), triple) in &peaks {
            let dir = pixel_to_dir(
                (*pano_idx as usize % w) as f64,
                (*pano_idx as usize / w) as f64,
                h,
                w,
            )?;
            let target = match tag {
                TripleTag::Direct => dir,
                TripleTag::Antipodal => dir.antipode(),
            };
            let Some((px, py)) = project_into_view(pose, &target, side) else {
                return Err(Error::invalid(format!(
                    "triple for pano {pano_idx} does not re-project into view {vi}"
                )));
            };
            let tx = (triple.view_idx as usize % side) as f64;
            let ty = (triple.view_idx as usize / side) as f64;
            let err = ((px - tx).powi(2) + (py - ty).powi(2)).sqrt();
            match tag {
                TripleTag::Direct => {
                    report.direct_groups += 1;
                    report.max_direct_err_px = report.max_direct_err_px.max(err);
                }
                TripleTag::Antipodal => {
                    report.antipodal_groups += 1;
                    report.max_antipodal_err_px = report.max_antipodal_err_px.max(err);
                }
            }
        }

        // Transposing, then transposing back, must reproduce the stored list.
        let mut back = mask.reverse_triples(vi);
        back.sort_by_key(|t| (t.pano_idx, t.view_idx, t.tag));
        if back != mask.triples(vi) {
            report.transpose_symmetric = false;
        }
    }
    Ok(report)
}

/// Verify that antipodal triples connect pixels whose directions are
/// antipodes within `tol_px` view pixels (the [`SphereDir::antipode`]
/// relation applied to the view pixel's own direction).
pub fn max_antipode_relation_err_px(mask: &CrossDomainMask) -> Result<f64> {
    let (h, w, side) = (mask.canvas_h(), mask.canvas_w(), mask.view_side());
    let mut max_err = 0.0f64;
    for (vi, pose) in mask.views().iter().enumerate() {
        let mut peaks: HashMap<u32, MaskTriple> = HashMap::new();
        for t in mask.triples(vi) {
            if t.tag != TripleTag::Antipodal {
                continue;
            }
            peaks
                .entry(t.pano_idx)
                .and_modify(|cur| {
                    if t.weight > cur.weight {
                        *cur = *t;
                    }
                })
                .or_insert(*t);
        }
        for (pano_idx, triple) in &peaks {
            let pano_dir = pixel_to_dir(
                (*pano_idx as usize % w) as f64,
                (*pano_idx as usize / w) as f64,
                h,
                w,
            )?;
            // Direction of the view pixel the triple points at; its antipode
            // must land within tolerance of the pano pixel's direction.
            let px = (triple.view_idx as usize % side) as f64;
            let py = (triple.view_idx as usize / side) as f64;
            let vdir = view_pixel_dir(pose, px, py, side);
            let angle = vdir.antipode().angle_to(&pano_dir);
            // Convert the angular error to view pixels at this view's scale.
            let fov_rad = 2.0 * pose.tan_half_fov().atan();
            max_err = max_err.max(angle * side as f64 / fov_rad);
        }
    }
    Ok(max_err)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pose(fov: f64, yaw_deg: f64, pitch_deg: f64) -> CameraPose {
        CameraPose::from_angles(fov, yaw_deg.to_radians(), pitch_deg.to_radians()).unwrap()
    }

    #[test]
    fn center_pixel_maps_to_view_center_without_blur() {
        let h = 32;
        let views = vec![pose(90.0, 0.0, 0.0)];
        let mask = build_cross_domain_mask(h, &views, 0.0, false).unwrap();

        let side = mask.view_side();
        assert_eq!(side, 16);
        // Pano pixel nearest the forward direction.
        let (u, v) = (h as u32, h as u32 / 2); // (theta, phi) just past (0, 0)
        let pano_idx = v * 2 * h as u32 + u;
        let hits: Vec<&MaskTriple> = mask
            .triples(0)
            .iter()
            .filter(|t| t.pano_idx == pano_idx)
            .collect();
        assert_eq!(hits.len(), 1);
        assert_eq!(hits[0].weight, 1.0);
        assert_eq!(hits[0].tag, TripleTag::Direct);
        let center = (side as f64 - 1.0) / 2.0;
        let px = (hits[0].view_idx as usize % side) as f64;
        let py = (hits[0].view_idx as usize / side) as f64;
        assert!((px - center).abs() <= 1.0 && (py - center).abs() <= 1.0);
        assert_eq!(mask.count_tag(TripleTag::Antipodal), 0);
    }

    #[test]
    fn antipodal_triple_lands_where_the_antipode_projects() {
        let h = 32;
        let views = vec![pose(90.0, 0.0, 0.0), pose(90.0, 180.0, 0.0)];
        let mask = build_cross_domain_mask(h, &views, 0.0, true).unwrap();
        let side = mask.view_side();

        let (u, v) = (h, h / 2);
        let pano_idx = (v * 2 * h + u) as u32;
        let dir = pixel_to_dir(u as f64, v as f64, h, 2 * h).unwrap();
        let (ex, ey) = project_into_view(&views[1], &dir.antipode(), side).unwrap();

        let hit = mask
            .triples(1)
            .iter()
            .find(|t| t.pano_idx == pano_idx && t.tag == TripleTag::Antipodal)
            .expect("antipodal triple exists");
        let px = (hit.view_idx as usize % side) as f64;
        let py = (hit.view_idx as usize / side) as f64;
        assert!(
            ((px - ex).powi(2) + (py - ey).powi(2)).sqrt() <= 1.0,
            "landed ({px}, {py}) expected ({ex:.2}, {ey:.2})"
        );
    }

    #[test]
    fn blurred_weights_decay_with_distance_from_peak() {
        let h = 32;
        let views = vec![pose(90.0, 0.0, 0.0)];
        let mask = build_cross_domain_mask(h, &views, 1.0, false).unwrap();
        let side = mask.view_side();

        // Group triples by pano pixel; weight must be non-increasing with
        // distance from that group's peak, and everything stays in (0, 1].
        let mut by_pano: HashMap<u32, Vec<&MaskTriple>> = HashMap::new();
        for t in mask.triples(0) {
            assert!(t.weight > 0.0 && t.weight <= 1.0);
            by_pano.entry(t.pano_idx).or_default().push(t);
        }
        for group in by_pano.values() {
            let peak = group
                .iter()
                .max_by(|a, b| a.weight.total_cmp(&b.weight))
                .unwrap();
            let (pxc, pyc) = (
                (peak.view_idx as usize % side) as f64,
                (peak.view_idx as usize / side) as f64,
            );
            let mut pairs: Vec<(f64, f32)> = group
                .iter()
                .map(|t| {
                    let dx = (t.view_idx as usize % side) as f64 - pxc;
                    let dy = (t.view_idx as usize / side) as f64 - pyc;
                    ((dx * dx + dy * dy).sqrt(), t.weight)
                })
                .collect();
            pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
            for w in pairs.windows(2) {
                if w[1].0 > w[0].0 {
                    assert!(
                        w[1].1 <= w[0].1 + 1e-6,
                        "weight grew with distance: {w:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn antipodal_on_adds_triples() {
        let h = 16;
        let views = vec![pose(100.0, 0.0, 0.0), pose(100.0, 180.0, 0.0)];
        let without = build_cross_domain_mask(h, &views, 0.5, false).unwrap();
        let with = build_cross_domain_mask(h, &views, 0.5, true).unwrap();
        assert!(with.total_triples() > without.total_triples());
        assert_eq!(without.count_tag(TripleTag::Antipodal), 0);
        assert!(with.count_tag(TripleTag::Antipodal) > 0);
    }

    #[test]
    fn geometry_validation_passes_on_small_canvas() {
        let h = 16;
        let views = crate::sphere::icosahedron_views(80.0).unwrap();
        let mask = build_cross_domain_mask(h, &views, 0.0, true).unwrap();
        let report = validate_geometry(&mask).unwrap();
        assert!(report.passes(), "{report:?}");
        assert!(report.direct_groups > 0 && report.antipodal_groups > 0);
        // With sigma=0 the peak is the rounded landing pixel: within half a
        // pixel per axis.
        assert!(report.max_direct_err_px <= 0.5f64.sqrt() + 1e-9);
    }

    #[test]
    fn file_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let bin = dir.path().join("mask.xdm");
        let sidecar = dir.path().join("mask.json");
        let views = vec![pose(90.0, 0.0, 0.0), pose(90.0, 90.0, 10.0)];
        let mask = build_cross_domain_mask(8, &views, 1.0, true).unwrap();
        mask.save(&bin, &sidecar).unwrap();
        let back = CrossDomainMask::load(&bin, &sidecar).unwrap();
        assert_eq!(mask.canvas_h(), back.canvas_h());
        assert_eq!(mask.view_side(), back.view_side());
        assert_eq!(mask.total_triples(), back.total_triples());
        for v in 0..views.len() {
            assert_eq!(mask.triples(v), back.triples(v));
        }
    }

    #[test]
    fn bias_zero_lambdas_give_zero_matrix() {
        let views = vec![pose(90.0, 0.0, 0.0)];
        let mask = build_cross_domain_mask(8, &views, 0.0, false).unwrap();
        let bias = attention_bias(&mask, 0, 0.0, 0.0).unwrap();
        assert!(bias.data.iter().all(|&x| x == 0.0));

        let bias = attention_bias(&mask, 0, 2.0, 0.0).unwrap();
        let max = bias.data.iter().cloned().fold(f32::MIN, f32::max);
        assert_eq!(max, 2.0);
        assert!(attention_bias(&mask, 0, f64::NAN, 0.0).is_err());
        assert!(attention_bias(&mask, 1, 1.0, 1.0).is_err());
    }

    #[test]
    fn from_parts_rejects_bad_triples() {
        let views = vec![pose(90.0, 0.0, 0.0)];
        let bad_weight = vec![vec![MaskTriple {
            pano_idx: 0,
            view_idx: 0,
            tag: TripleTag::Direct,
            weight: 1.5,
        }]];
        assert!(CrossDomainMask::from_parts(4, 2, 0.0, views.clone(), bad_weight).is_err());
        let bad_idx = vec![vec![MaskTriple {
            pano_idx: 999,
            view_idx: 0,
            tag: TripleTag::Direct,
            weight: 0.5,
        }]];
        assert!(CrossDomainMask::from_parts(4, 2, 0.0, views, bad_idx).is_err());
    }
}
