//! Batch front end for the spherical video geometry engine.
//!
//! Reports are JSON on stdout; diagnostics go to stderr, so commands compose
//! in pipelines. Every command is deterministic given identical flags,
//! inputs, and seed.

mod commands;
mod config;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use config::RunConfig;

#[derive(Parser)]
#[command(name = "pano360", version, about = "Spherical video geometry toolkit")]
struct Cli {
    /// Optional key=value config file supplying defaults for the flags below.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reproject frames between the equirectangular and perspective domains.
    Project(ProjectArgs),
    /// P2E a view sequence, E2P it back, and report the round-trip PSNR.
    Roundtrip(RoundtripArgs),
    /// Rasterize a trajectory's video mask with inscribed rectangles and
    /// positional encodings.
    Mask(MaskArgs),
    /// Build the cross-domain spherical attention mask.
    Attnmask(AttnmaskArgs),
    /// Drop static clips by the optical-flow rule and write a manifest.
    Filter(FilterArgs),
    /// Fit a line to per-frame pitch estimates.
    Smooth(SmoothArgs),
    /// Score wrap-seam continuity of canvas frames.
    Seamcheck(SeamcheckArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Direction {
    E2p,
    P2e,
}

#[derive(Clone, Copy, ValueEnum)]
enum InterpArg {
    Bilinear,
    Nearest,
}

impl From<InterpArg> for pano360_core::resample::Interp {
    fn from(v: InterpArg) -> Self {
        match v {
            InterpArg::Bilinear => Self::Bilinear,
            InterpArg::Nearest => Self::Nearest,
        }
    }
}

#[derive(Args)]
struct ProjectArgs {
    #[arg(long, value_enum)]
    direction: Direction,
    /// Input frames: a directory of PNGs, a single PNG, or a .pvf file.
    #[arg(long)]
    input: PathBuf,
    /// Output frames: a directory (PNG sequence) or a .pvf path.
    #[arg(long)]
    output: PathBuf,
    /// Pose trajectory JSON (one pose per frame, or a single broadcast pose).
    #[arg(long, conflicts_with = "eval_views")]
    traj: Option<PathBuf>,
    /// Use the four fixed evaluation views (e2p only).
    #[arg(long)]
    eval_views: bool,
    /// Canvas height for p2e output.
    #[arg(long)]
    canvas_height: Option<usize>,
    /// View side for e2p output.
    #[arg(long)]
    side: Option<usize>,
    /// Where p2e writes the per-frame masks (default: <output>_masks).
    #[arg(long)]
    masks: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "bilinear")]
    interp: InterpArg,
}

#[derive(Args)]
struct RoundtripArgs {
    /// Input view frames (square).
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    fov: Option<f64>,
    #[arg(long, default_value_t = 0.0)]
    yaw_deg: f64,
    #[arg(long, default_value_t = 0.0)]
    pitch_deg: f64,
    #[arg(long)]
    canvas_height: Option<usize>,
    /// Erode the projection mask this many pixels before comparing.
    #[arg(long, default_value_t = 2)]
    erode: usize,
    /// Exit nonzero when the worst frame falls below this PSNR (dB).
    #[arg(long)]
    min_psnr: Option<f64>,
}

#[derive(Args)]
struct MaskArgs {
    /// Pose trajectory JSON.
    #[arg(long, conflicts_with = "sample", required_unless_present = "sample")]
    traj: Option<PathBuf>,
    /// Sample a linear elevation trajectory instead of reading one.
    #[arg(long)]
    sample: bool,
    /// Frame count for --sample.
    #[arg(long, default_value_t = 40)]
    frames: usize,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    fov: Option<f64>,
    #[arg(long)]
    canvas_height: Option<usize>,
    /// Per-scalar sinusoidal embedding dimension.
    #[arg(long)]
    embed_dim: Option<usize>,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Args)]
struct AttnmaskArgs {
    /// Latent canvas height.
    #[arg(long)]
    canvas_height: Option<usize>,
    /// Per-view field of view for the icosahedron set.
    #[arg(long)]
    fov: Option<f64>,
    #[arg(long)]
    view_side: Option<usize>,
    #[arg(long)]
    sigma: Option<f64>,
    /// Skip the antipodal activations.
    #[arg(long)]
    no_antipodal: bool,
    /// Output base path; writes <base>.xdm and <base>.json.
    #[arg(long)]
    output: PathBuf,
    /// Additionally write a dense bias matrix for one view as a .pvf.
    #[arg(long)]
    emit_bias: bool,
    /// Which view the dense bias is for.
    #[arg(long, default_value_t = 0)]
    bias_view: usize,
    #[arg(long)]
    lambda_direct: Option<f64>,
    #[arg(long)]
    lambda_antipodal: Option<f64>,
    /// Re-project every activation and fail on geometric inconsistency.
    #[arg(long)]
    validate: bool,
}

#[derive(Args)]
struct FilterArgs {
    /// Candidate clip records (JSON lines).
    #[arg(long)]
    records: PathBuf,
    /// Separate flow-stats file joined by clip_id.
    #[arg(long)]
    flow_stats: Option<PathBuf>,
    /// Output manifest path (JSON lines, sorted by id).
    #[arg(long)]
    output: PathBuf,
    #[arg(long, default_value_t = pano360_core::datapipe::DEFAULT_FLOW_THRESH)]
    thresh: f32,
    #[arg(long, default_value_t = pano360_core::datapipe::DEFAULT_MIN_DYNAMIC_FRACTION)]
    min_fraction: f64,
}

#[derive(Args)]
struct SmoothArgs {
    /// Per-frame pitch estimates (JSON lines of {frame, pitch_deg}).
    #[arg(long)]
    estimates: PathBuf,
    /// Write the smoothed trajectory as pose-trajectory JSON.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Field of view recorded in the exported trajectory.
    #[arg(long)]
    fov: Option<f64>,
}

#[derive(Args)]
struct SeamcheckArgs {
    /// Canvas frames (directory of PNGs or .pvf).
    #[arg(long)]
    input: PathBuf,
    /// Exit nonzero when any frame scores above this.
    #[arg(long)]
    max_score: Option<f64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match &cli.config {
        Some(path) => match RunConfig::load(path) {
            Ok(cfg) => cfg,
            Err(e) => {
                eprintln!("error: {e:#}");
                return ExitCode::FAILURE;
            }
        },
        None => RunConfig::default(),
    };

    let result = match cli.command {
        Command::Project(args) => commands::project::run(args, &cfg),
        Command::Roundtrip(args) => commands::project::roundtrip(args, &cfg),
        Command::Mask(args) => commands::mask::run(args, &cfg),
        Command::Attnmask(args) => commands::attnmask::run(args, &cfg),
        Command::Filter(args) => commands::pipeline::filter(args),
        Command::Smooth(args) => commands::pipeline::smooth(args, &cfg),
        Command::Seamcheck(args) => commands::pipeline::seamcheck(args),
    };

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
