//! `attnmask`: build, serialize, and optionally validate the cross-domain
//! spherical attention mask.

use anyhow::{bail, Result};
use serde::Serialize;

use pano360_core::frame::FrameBuf;
use pano360_core::maskgen::{
    attention_bias, validate_geometry, ConsistencyReport, CrossDomainMask, CrossDomainParams,
    TripleTag,
};
use pano360_core::sphere::icosahedron_views;

use crate::config::RunConfig;
use crate::AttnmaskArgs;

use super::emit_report;

#[derive(Serialize)]
struct AttnmaskReport {
    canvas_h: usize,
    canvas_w: usize,
    view_side: usize,
    views: usize,
    fov_deg: f64,
    sigma: f64,
    antipodal: bool,
    triples: usize,
    direct_triples: usize,
    antipodal_triples: usize,
    binary: std::path::PathBuf,
    sidecar: std::path::PathBuf,
    bias_output: Option<std::path::PathBuf>,
    validation: Option<ConsistencyReport>,
}

pub fn run(args: AttnmaskArgs, cfg: &RunConfig) -> Result<()> {
    let h = args.canvas_height.unwrap_or(cfg.canvas_h);
    let fov = args
        .fov
        .unwrap_or(pano360_core::sphere::ICOSAHEDRON_DEFAULT_FOV_DEG);
    let sigma = args.sigma.unwrap_or(cfg.sigma);
    let views = icosahedron_views(fov)?;

    let mask = CrossDomainMask::build_with(
        h,
        &views,
        CrossDomainParams {
            sigma,
            include_antipodal: !args.no_antipodal,
            view_side: args.view_side.or(cfg.view_side),
            ..CrossDomainParams::default()
        },
    )?;

    let binary = args.output.with_extension("xdm");
    let sidecar = args.output.with_extension("json");
    if let Some(parent) = binary.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)?;
        }
    }
    mask.save(&binary, &sidecar)?;

    let bias_output = if args.emit_bias {
        let lambda_d = args.lambda_direct.unwrap_or(cfg.lambda_direct);
        let lambda_a = args.lambda_antipodal.unwrap_or(cfg.lambda_antipodal);
        let bias = attention_bias(&mask, args.bias_view, lambda_d, lambda_a)?;
        let frame = FrameBuf::from_data(bias.rows, bias.cols, 1, bias.data)?;
        let path = args
            .output
            .with_extension(format!("bias_view{}.pvf", args.bias_view));
        pano360_core::io::write_pvf(&[frame], &path)?;
        Some(path)
    } else {
        None
    };

    let validation = if args.validate {
        let report = validate_geometry(&mask)?;
        if !report.passes() {
            emit_report(&report)?;
            bail!("cross-domain mask failed geometric validation");
        }
        Some(report)
    } else {
        None
    };

    emit_report(&AttnmaskReport {
        canvas_h: mask.canvas_h(),
        canvas_w: mask.canvas_w(),
        view_side: mask.view_side(),
        views: mask.views().len(),
        fov_deg: fov,
        sigma,
        antipodal: !args.no_antipodal,
        triples: mask.total_triples(),
        direct_triples: mask.count_tag(TripleTag::Direct),
        antipodal_triples: mask.count_tag(TripleTag::Antipodal),
        binary,
        sidecar,
        bias_output,
        validation,
    })
}
