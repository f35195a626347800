//! Elevation-aware pitch trajectories: seeded linear sampling for
//! augmentation, and least-squares smoothing of per-frame estimates from an
//! external calibration tool.

use std::io::BufRead;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::sphere::PoseTrajectory;

/// Sampled starting pitches stay inside this open interval (degrees).
pub const START_RANGE_DEG: f64 = 20.0;
/// Sampled slopes stay inside `(-0.5, 0.5)` degrees per frame.
pub const SLOPE_RANGE_DEG_PER_FRAME: f64 = 0.5;
/// Hard clamp on any per-frame pitch sample (degrees).
pub const PITCH_CLAMP_DEG: f64 = 90.0;

/// A linear pitch trajectory `pitch(t) = start + slope * t`, in degrees.
///
/// Sampled trajectories keep `start` in (-20, 20) and `slope` in (-0.5, 0.5)
/// degrees/frame; fitted trajectories carry whatever the data says, subject
/// only to the +-90 degree clamp on the samples.
#[derive(Debug, Clone, PartialEq)]
pub struct ElevationTrajectory {
    start_deg: f64,
    slope_deg_per_frame: f64,
    samples_deg: Vec<f64>,
}

impl ElevationTrajectory {
    fn from_line(start_deg: f64, slope: f64, frame_count: usize) -> Self {
        let samples_deg = (0..frame_count)
            .map(|t| (start_deg + slope * t as f64).clamp(-PITCH_CLAMP_DEG, PITCH_CLAMP_DEG))
            .collect();
        Self {
            start_deg,
            slope_deg_per_frame: slope,
            samples_deg,
        }
    }

    pub fn start_deg(&self) -> f64 {
        self.start_deg
    }

    pub fn slope_deg_per_frame(&self) -> f64 {
        self.slope_deg_per_frame
    }

    pub fn samples_deg(&self) -> &[f64] {
        &self.samples_deg
    }

    pub fn len(&self) -> usize {
        self.samples_deg.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples_deg.is_empty()
    }

    /// Pose trajectory at the given field of view, yaw normalized to zero.
    pub fn to_pose_trajectory(&self, fov_deg: f64) -> Result<PoseTrajectory> {
        PoseTrajectory::from_pitch_series(fov_deg, &self.samples_deg)
    }
}

/// Draw a linear pitch trajectory: start uniform in (-20, 20) degrees, slope
/// uniform in (-0.5, 0.5) degrees/frame, filled as `start + slope * t`.
///
/// The generator is ChaCha8 keyed by `seed`, so identical seeds reproduce
/// identical trajectories on any platform.
pub fn sample_trajectory(frame_count: usize, seed: u64) -> ElevationTrajectory {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let start = rng.random_range(-START_RANGE_DEG..START_RANGE_DEG);
    let slope = rng.random_range(-SLOPE_RANGE_DEG_PER_FRAME..SLOPE_RANGE_DEG_PER_FRAME);
    ElevationTrajectory::from_line(start, slope, frame_count)
}

/// Raw per-frame pitch estimates (degrees) from an external estimator.
///
/// Frames are dense from `first_frame` on; the loader interpolates gaps.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimateSeries {
    first_frame: i64,
    pitches_deg: Vec<f64>,
    source: String,
}

impl EstimateSeries {
    pub fn new(first_frame: i64, pitches_deg: Vec<f64>, source: impl Into<String>) -> Result<Self> {
        if pitches_deg.len() < 2 {
            return Err(Error::TooFewEstimates(pitches_deg.len()));
        }
        Ok(Self {
            first_frame,
            pitches_deg,
            source: source.into(),
        })
    }

    pub fn first_frame(&self) -> i64 {
        self.first_frame
    }

    pub fn pitches_deg(&self) -> &[f64] {
        &self.pitches_deg
    }

    pub fn len(&self) -> usize {
        self.pitches_deg.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pitches_deg.is_empty()
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

/// Ordinary least-squares fit of pitch against frame index.
///
/// Exact on noiseless lines. The fitted start/slope bypass the sampling
/// bounds (real footage may exceed them); only the +-90 clamp applies to the
/// resampled trajectory.
pub fn fit_line(series: &EstimateSeries) -> Result<ElevationTrajectory> {
    let n = series.len();
    if n < 2 {
        return Err(Error::TooFewEstimates(n));
    }
    if series.pitches_deg().iter().any(|v| !v.is_finite()) {
        return Err(Error::CorruptEstimates(format!(
            "non-finite pitch estimate in {}",
            series.source()
        )));
    }

    let mean_x = (n as f64 - 1.0) / 2.0;
    let mean_y = series.pitches_deg().iter().sum::<f64>() / n as f64;
    let mut sxy = 0.0;
    let mut sxx = 0.0;
    for (t, &y) in series.pitches_deg().iter().enumerate() {
        let dx = t as f64 - mean_x;
        sxy += dx * (y - mean_y);
        sxx += dx * dx;
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    Ok(ElevationTrajectory::from_line(intercept, slope, n))
}

#[derive(Deserialize)]
struct EstimateLine {
    frame: i64,
    pitch_deg: f64,
}

/// Load per-frame pitch estimates from a JSON-lines file
/// (`{"frame": int, "pitch_deg": real}` per line).
///
/// Frames are sorted, duplicates resolve last-wins, and gaps between observed
/// frames are filled by linear interpolation.
pub fn load_estimates(path: &Path) -> Result<EstimateSeries> {
    let file = std::fs::File::open(path)?;
    let reader = std::io::BufReader::new(file);

    let mut observed: Vec<(i64, f64)> = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: EstimateLine = serde_json::from_str(&line).map_err(|e| {
            Error::format(
                "estimate file",
                format!("{}:{}: {e}", path.display(), lineno + 1),
            )
        })?;
        observed.push((rec.frame, rec.pitch_deg));
    }
    if observed.is_empty() {
        return Err(Error::format(
            "estimate file",
            format!("{} contains no estimates", path.display()),
        ));
    }

    // Sort by frame; stable sort keeps file order within a frame so the last
    // occurrence wins the dedup below.
    observed.sort_by_key(|&(frame, _)| frame);
    let mut dedup: Vec<(i64, f64)> = Vec::with_capacity(observed.len());
    for (frame, pitch) in observed {
        match dedup.last_mut() {
            Some(last) if last.0 == frame => last.1 = pitch,
            _ => dedup.push((frame, pitch)),
        }
    }
    if dedup.len() < 2 {
        return Err(Error::TooFewEstimates(dedup.len()));
    }

    let first = dedup[0].0;
    let last = dedup[dedup.len() - 1].0;
    let mut pitches = Vec::with_capacity((last - first + 1) as usize);
    for pair in dedup.windows(2) {
        let (f0, p0) = pair[0];
        let (f1, p1) = pair[1];
        pitches.push(p0);
        for f in f0 + 1..f1 {
            let t = (f - f0) as f64 / (f1 - f0) as f64;
            pitches.push(p0 + t * (p1 - p0));
        }
    }
    pitches.push(dedup[dedup.len() - 1].1);

    EstimateSeries::new(first, pitches, path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_rule_is_exact() {
        let traj = ElevationTrajectory::from_line(10.0, 0.25, 5);
        assert_eq!(traj.samples_deg(), &[10.0, 10.25, 10.5, 10.75, 11.0]);
    }

    #[test]
    fn zero_slope_is_constant() {
        let traj = ElevationTrajectory::from_line(-3.5, 0.0, 4);
        assert!(traj.samples_deg().iter().all(|&p| p == -3.5));
    }

    #[test]
    fn sampling_is_seed_deterministic_and_bounded() {
        let a = sample_trajectory(40, 7);
        let b = sample_trajectory(40, 7);
        assert_eq!(a, b);
        assert_ne!(a, sample_trajectory(40, 8));

        let mut start_sum = 0.0;
        let mut slope_sum = 0.0;
        for seed in 0..1000 {
            let t = sample_trajectory(3, seed);
            assert!(t.start_deg().abs() < START_RANGE_DEG);
            assert!(t.slope_deg_per_frame().abs() < SLOPE_RANGE_DEG_PER_FRAME);
            for (i, &s) in t.samples_deg().iter().enumerate() {
                assert_eq!(s, t.start_deg() + t.slope_deg_per_frame() * i as f64);
            }
            start_sum += t.start_deg();
            slope_sum += t.slope_deg_per_frame();
        }
        assert!((start_sum / 1000.0).abs() < 1.5);
        assert!((slope_sum / 1000.0).abs() < 1.5);
    }

    #[test]
    fn fit_recovers_noiseless_line() {
        let series = EstimateSeries::new(0, vec![0.0, 1.0, 2.0, 3.0], "test").unwrap();
        let fit = fit_line(&series).unwrap();
        assert!((fit.slope_deg_per_frame() - 1.0).abs() < 1e-10);
        assert!(fit.start_deg().abs() < 1e-10);
        assert_eq!(fit.samples_deg().len(), 4);
    }

    #[test]
    fn fit_matches_closed_form_least_squares() {
        // By hand: Sxy = 15.5, Sxx = 5 -> slope 3.1, intercept -1.4.
        let series = EstimateSeries::new(0, vec![0.0, 1.0, 2.0, 10.0], "test").unwrap();
        let fit = fit_line(&series).unwrap();
        assert!((fit.slope_deg_per_frame() - 3.1).abs() < 1e-9);
        assert!((fit.start_deg() + 1.4).abs() < 1e-9);
        for (got, want) in fit.samples_deg().iter().zip([-1.4, 1.7, 4.8, 7.9]) {
            assert!((got - want).abs() < 1e-9);
        }
    }

    #[test]
    fn fit_has_minimal_residual_among_probe_lines() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let values: Vec<f64> = (0..25)
            .map(|t| 4.0 - 0.3 * t as f64 + rng.random_range(-2.0..2.0))
            .collect();
        let series = EstimateSeries::new(0, values.clone(), "probe").unwrap();
        let fit = fit_line(&series).unwrap();
        let rss = |intercept: f64, slope: f64| {
            values
                .iter()
                .enumerate()
                .map(|(t, y)| {
                    let r = y - (intercept + slope * t as f64);
                    r * r
                })
                .sum::<f64>()
        };
        let best = rss(fit.start_deg(), fit.slope_deg_per_frame());
        for _ in 0..100 {
            let probe = rss(
                fit.start_deg() + rng.random_range(-3.0..3.0),
                fit.slope_deg_per_frame() + rng.random_range(-0.4..0.4),
            );
            assert!(best <= probe + 1e-12, "probe beat the fit: {probe} < {best}");
        }
    }

    #[test]
    fn fit_rejects_nan() {
        let series = EstimateSeries::new(0, vec![0.0, f64::NAN, 2.0], "test").unwrap();
        assert!(matches!(fit_line(&series), Err(Error::CorruptEstimates(_))));
    }

    #[test]
    fn fit_bypasses_sampling_bounds_but_clamps() {
        let series = EstimateSeries::new(0, vec![40.0, 60.0, 80.0, 100.0], "test").unwrap();
        let fit = fit_line(&series).unwrap();
        assert!((fit.slope_deg_per_frame() - 20.0).abs() < 1e-9);
        assert_eq!(*fit.samples_deg().last().unwrap(), PITCH_CLAMP_DEG);
    }

    #[test]
    fn loader_sorts_interpolates_and_dedups() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("est.jsonl");
        std::fs::write(
            &path,
            concat!(
                "{\"frame\": 2, \"pitch_deg\": 4.0}\n",
                "{\"frame\": 0, \"pitch_deg\": 0.0}\n",
                "{\"frame\": 5, \"pitch_deg\": 3.0}\n",
                "{\"frame\": 5, \"pitch_deg\": 7.0}\n",
            ),
        )
        .unwrap();
        let series = load_estimates(&path).unwrap();
        assert_eq!(series.first_frame(), 0);
        // Frame 1 interpolated between 0 and 2; frames 3..4 between 2 and 5;
        // duplicate frame 5 keeps the last value (7).
        assert_eq!(series.pitches_deg()[0], 0.0);
        assert_eq!(series.pitches_deg()[1], 2.0);
        assert_eq!(series.pitches_deg()[2], 4.0);
        assert_eq!(series.pitches_deg()[3], 5.0);
        assert_eq!(series.pitches_deg()[4], 6.0);
        assert_eq!(series.pitches_deg()[5], 7.0);
    }

    #[test]
    fn loader_rejects_garbage() {
        let dir = tempfile::tempdir().unwrap();
        let empty = dir.path().join("empty.jsonl");
        std::fs::write(&empty, "").unwrap();
        assert!(load_estimates(&empty).is_err());

        let bad = dir.path().join("bad.jsonl");
        std::fs::write(&bad, "not json\n").unwrap();
        assert!(matches!(
            load_estimates(&bad),
            Err(Error::Format { .. })
        ));

        let single = dir.path().join("single.jsonl");
        std::fs::write(&single, "{\"frame\": 0, \"pitch_deg\": 1.0}\n").unwrap();
        assert!(matches!(
            load_estimates(&single),
            Err(Error::TooFewEstimates(1))
        ));
    }

    #[test]
    fn three_lines_load_as_length_three() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("est.jsonl");
        std::fs::write(
            &path,
            concat!(
                "{\"frame\": 0, \"pitch_deg\": 1.0}\n",
                "{\"frame\": 1, \"pitch_deg\": 2.0}\n",
                "{\"frame\": 2, \"pitch_deg\": 3.0}\n",
            ),
        )
        .unwrap();
        assert_eq!(load_estimates(&path).unwrap().len(), 3);
    }
}
