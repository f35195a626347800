//! Run configuration shared by all subcommands, optionally loaded from a
//! `key=value` file and overridden by flags.

use std::path::Path;

use anyhow::{bail, Context, Result};

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub canvas_h: usize,
    pub fov_deg: f64,
    /// Perspective view side; `None` means `canvas_h / 2`.
    pub view_side: Option<usize>,
    pub sigma: f64,
    pub lambda_direct: f64,
    pub lambda_antipodal: f64,
    pub seed: u64,
    pub embed_dim: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            canvas_h: 512,
            fov_deg: 90.0,
            view_side: None,
            sigma: pano360_core::maskgen::DEFAULT_SIGMA,
            lambda_direct: pano360_core::maskgen::DEFAULT_LAMBDA_DIRECT,
            lambda_antipodal: pano360_core::maskgen::DEFAULT_LAMBDA_ANTIPODAL,
            seed: 0,
            embed_dim: 64,
        }
    }
}

impl RunConfig {
    /// Parse a `key=value` file (`#` starts a comment). Unknown keys are
    /// rejected so typos surface instead of silently using defaults.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("reading config {}", path.display()))?;
        let mut cfg = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("{}:{}: expected key=value", path.display(), lineno + 1);
            };
            let (key, value) = (key.trim(), value.trim());
            let ctx = || format!("{}:{}: bad value for {key}", path.display(), lineno + 1);
            match key {
                "canvas_h" => cfg.canvas_h = value.parse().with_context(ctx)?,
                "fov_deg" => cfg.fov_deg = value.parse().with_context(ctx)?,
                "view_side" => cfg.view_side = Some(value.parse().with_context(ctx)?),
                "sigma" => cfg.sigma = value.parse().with_context(ctx)?,
                "lambda_direct" => cfg.lambda_direct = value.parse().with_context(ctx)?,
                "lambda_antipodal" => cfg.lambda_antipodal = value.parse().with_context(ctx)?,
                "seed" => cfg.seed = value.parse().with_context(ctx)?,
                "embed_dim" => cfg.embed_dim = value.parse().with_context(ctx)?,
                other => bail!("{}:{}: unknown key `{other}`", path.display(), lineno + 1),
            }
        }
        Ok(cfg)
    }

    pub fn view_side_or_default(&self, canvas_h: usize) -> usize {
        self.view_side.unwrap_or(canvas_h / 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_values_and_comments() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(
            &path,
            "canvas_h = 128\nfov_deg=75.5 # narrow\n\n# comment\nseed=9\n",
        )
        .unwrap();
        let cfg = RunConfig::load(&path).unwrap();
        assert_eq!(cfg.canvas_h, 128);
        assert_eq!(cfg.fov_deg, 75.5);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.embed_dim, 64);
    }

    #[test]
    fn rejects_unknown_keys() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("run.cfg");
        std::fs::write(&path, "canvs_h=128\n").unwrap();
        assert!(RunConfig::load(&path).is_err());
        std::fs::write(&path, "canvas_h\n").unwrap();
        assert!(RunConfig::load(&path).is_err());
    }
}
