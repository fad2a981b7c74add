//! Rotation × noise accuracy sweeps and the throughput benchmark.
//!
//! Each cell of a sweep renders a single vertex per trial (quadrants of 64 and
//! 191 with the 3×3 Gaussian blur, then noise), runs a detector over the full
//! frame and records the distance of its estimate from the exact vertex.
//! Noiseless renders are shared across the cells of one angle; noise seeds are
//! derived per `(seed, angle index, variance index, trial)` so results do not
//! depend on scheduling.

use std::fmt::{self, Write as _};
use std::hint::black_box;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::baselines::{harris_detect, ptam_detect, HarrisParams, PtamParams};
use crate::detector::{detect, gaussian_blur, pre_blur, BlurKernel};
use crate::select::{strongest_connected, subpixel_com, ResponseValue};
use crate::synth::{add_noise, render_vertex_clean, OffsetMode, SynthSpec};
use crate::{Error, GrayImage, Plane, Result, RingGeometry};

/// Nearest-detection distances are capped at this many pixels.
pub const BINARY_CAP_PX: f64 = 5.0;
/// Fraction of the largest positive response used to binarize ChESS output.
pub const BINARY_THRESHOLD: f64 = 0.015;
/// Blur applied ahead of both detectors in the binary comparison.
pub const BINARY_BLUR_SIGMA: f64 = 1.0;

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Detector {
    Chess,
    /// ChESS on input smoothed by the 5×5 Gaussian.
    ChessBlur5,
    Harris,
    HarrisNoBlur,
    Ptam { gate: u8 },
}

impl Detector {
    pub fn name(&self) -> String {
        match self {
            Detector::Chess => "chess".into(),
            Detector::ChessBlur5 => "chess_blur5".into(),
            Detector::Harris => "harris".into(),
            Detector::HarrisNoBlur => "harris_noblur".into(),
            Detector::Ptam { gate } => format!("ptam:{gate}"),
        }
    }

    /// Accepts the names produced by [`Detector::name`]; `ptam` alone uses
    /// the default gate.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim().to_ascii_lowercase().replace('-', "_");
        match s.as_str() {
            "chess" => Ok(Detector::Chess),
            "chess_blur5" => Ok(Detector::ChessBlur5),
            "harris" => Ok(Detector::Harris),
            "harris_noblur" => Ok(Detector::HarrisNoBlur),
            "ptam" => Ok(Detector::Ptam {
                gate: PtamParams::default().gate,
            }),
            other => match other.strip_prefix("ptam:").map(str::parse::<u8>) {
                Some(Ok(gate)) if gate > 0 => Ok(Detector::Ptam { gate }),
                _ => Err(Error::invalid(format!(
                    "unknown detector '{other}' (expected chess, chess_blur5, harris, harris_noblur or ptam[:gate])"
                ))),
            },
        }
    }
}

impl fmt::Display for Detector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Localization {
    IntegerArgmax,
    Com5x5,
}

impl Localization {
    pub fn name(self) -> &'static str {
        match self {
            Localization::IntegerArgmax => "integer_argmax",
            Localization::Com5x5 => "com5x5",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().replace('-', "_").as_str() {
            "integer_argmax" | "argmax" => Ok(Localization::IntegerArgmax),
            "com5x5" | "com" => Ok(Localization::Com5x5),
            other => Err(Error::invalid(format!("unknown localization '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub angles: Vec<f64>,
    pub noise_variances: Vec<f64>,
    pub detector: Detector,
    pub offset_mode: OffsetMode,
    pub localization: Localization,
    pub trials_per_cell: usize,
    pub seed: u64,
    pub width: usize,
    pub height: usize,
}

/// `start, start + step, …` up to and including `stop` (within step/1000).
pub fn linspace_step(start: f64, stop: f64, step: f64) -> Vec<f64> {
    if !(step > 0.0) || stop < start {
        return vec![];
    }
    let n = ((stop - start) / step + 1e-3).floor() as usize;
    (0..=n).map(|k| start + k as f64 * step).collect()
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            angles: linspace_step(0.0, 90.0, 2.5),
            noise_variances: linspace_step(0.0, 10.0, 0.5),
            detector: Detector::Chess,
            offset_mode: OffsetMode::GridAligned,
            localization: Localization::IntegerArgmax,
            trials_per_cell: 5,
            seed: 0,
            width: 640,
            height: 480,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        if self.angles.is_empty() || self.noise_variances.is_empty() {
            return Err(Error::invalid("angle and noise variance lists must be non-empty"));
        }
        if self.trials_per_cell == 0 {
            return Err(Error::invalid("trials_per_cell must be at least 1"));
        }
        if let Some(a) = self.angles.iter().find(|a| !a.is_finite()) {
            return Err(Error::invalid(format!("angle {a} is not finite")));
        }
        if let Some(v) = self.noise_variances.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
            return Err(Error::invalid(format!("noise variance {v} is not a finite non-negative number")));
        }
        self.spec(self.angles[0], 0.0, 0).validate()
    }

    fn spec(&self, angle: f64, noise_variance: f64, seed: u64) -> SynthSpec {
        SynthSpec {
            angle,
            offset_mode: self.offset_mode,
            noise_variance,
            seed,
            blur: Some(BlurKernel::Gauss3),
            width: self.width,
            height: self.height,
            ..SynthSpec::default()
        }
    }
}

/// Per-cell mean errors, angle-major.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorGrid {
    pub angles: Vec<f64>,
    pub noise_variances: Vec<f64>,
    /// Mean over trials that produced an estimate; NaN if none did.
    pub mean_error: Vec<f64>,
    /// Trials that produced an estimate.
    pub trials: Vec<usize>,
    /// Trials with no estimate (no surviving response).
    pub misses: Vec<usize>,
}

impl ErrorGrid {
    fn index(&self, angle_idx: usize, var_idx: usize) -> usize {
        angle_idx * self.noise_variances.len() + var_idx
    }

    pub fn error(&self, angle_idx: usize, var_idx: usize) -> f64 {
        self.mean_error[self.index(angle_idx, var_idx)]
    }

    pub fn trials_at(&self, angle_idx: usize, var_idx: usize) -> usize {
        self.trials[self.index(angle_idx, var_idx)]
    }

    pub fn total_misses(&self) -> usize {
        self.misses.iter().sum()
    }

    /// Mean over all cells with an estimate.
    pub fn global_mean(&self) -> f64 {
        let vals: Vec<f64> = self.mean_error.iter().copied().filter(|v| !v.is_nan()).collect();
        vals.iter().sum::<f64>() / vals.len() as f64
    }

    /// Mean over angles for one noise variance.
    pub fn mean_over_angles(&self, var_idx: usize) -> f64 {
        let n = self.angles.len();
        (0..n).map(|a| self.error(a, var_idx)).sum::<f64>() / n as f64
    }

    /// Mean over noise variances for one angle.
    pub fn mean_over_noise(&self, angle_idx: usize) -> f64 {
        let n = self.noise_variances.len();
        (0..n).map(|v| self.error(angle_idx, v)).sum::<f64>() / n as f64
    }

    /// Largest noise variance up to which the angle-averaged error stays
    /// below `limit` at every listed variance. `None` if the first fails.
    pub fn noise_tolerance(&self, limit: f64) -> Option<f64> {
        let mut best = None;
        for (v, &var) in self.noise_variances.iter().enumerate() {
            if self.mean_over_angles(v) < limit {
                best = Some(var);
            } else {
                break;
            }
        }
        best
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("angle_deg,noise_var,mean_error_px,trials\n");
        for (a, angle) in self.angles.iter().enumerate() {
            for (v, var) in self.noise_variances.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{angle},{var},{:.6},{}",
                    self.error(a, v),
                    self.trials_at(a, v)
                );
            }
        }
        out
    }
}

/// Seed for one trial, mixed with SplitMix64 so neighbouring cells get
/// unrelated streams.
pub fn cell_seed(seed: u64, angle_idx: usize, var_idx: usize, trial: usize) -> u64 {
    let mut z = seed;
    for part in [angle_idx as u64, var_idx as u64, trial as u64] {
        z = splitmix64(z ^ splitmix64(part.wrapping_add(0x9e37_79b9_7f4a_7c15)));
    }
    z
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn localize<T: ResponseValue>(resp: &Plane<T>, loc: Localization) -> Option<(f64, f64)> {
    let (x, y) = strongest_connected(resp)?;
    Some(match loc {
        Localization::IntegerArgmax => (x as f64, y as f64),
        Localization::Com5x5 => subpixel_com(resp, x, y).unwrap_or((x as f64, y as f64)),
    })
}

/// Runs a response detector on a frame and localizes its strongest
/// connected response. PTAM has no graded response and is rejected.
pub fn locate(image: &GrayImage, detector: Detector, loc: Localization) -> Result<Option<(f64, f64)>> {
    let geom = RingGeometry::radius5();
    match detector {
        Detector::Chess => Ok(localize(&detect(image, &geom)?, loc)),
        Detector::ChessBlur5 => Ok(localize(&detect(&pre_blur(image, BlurKernel::Gauss5), &geom)?, loc)),
        Detector::Harris => Ok(localize(&harris_detect(image, &HarrisParams::default())?, loc)),
        Detector::HarrisNoBlur => Ok(localize(&harris_detect(image, &HarrisParams::without_blur())?, loc)),
        Detector::Ptam { .. } => Err(Error::invalid(
            "ptam has a binary output; use the binary sweep",
        )),
    }
}

fn distance(a: (f64, f64), b: (f64, f64)) -> f64 {
    (a.0 - b.0).hypot(a.1 - b.1)
}

/// Noiseless renders per angle, with ground truth.
fn clean_renders(cfg: &SweepConfig) -> Result<Vec<(GrayImage, (f64, f64))>> {
    cfg.angles
        .par_iter()
        .map(|&angle| {
            let spec = cfg.spec(angle, 0.0, 0);
            let mut img = render_vertex_clean(&spec)?;
            if let Some(k) = spec.blur {
                img = pre_blur(&img, k);
            }
            Ok((img, spec.vertex()))
        })
        .collect()
}

/// Shared cell loop; `measure` maps a noisy frame and its truth to an error,
/// or `None` for a miss.
fn sweep_with<F>(cfg: &SweepConfig, measure: F) -> Result<ErrorGrid>
where
    F: Fn(&GrayImage, (f64, f64)) -> Result<Option<f64>> + Sync,
{
    cfg.validate()?;
    let renders = clean_renders(cfg)?;
    let nv = cfg.noise_variances.len();
    let cells: Vec<(f64, usize, usize)> = (0..cfg.angles.len() * nv)
        .into_par_iter()
        .map(|cell| {
            let (a, v) = (cell / nv, cell % nv);
            let (clean, truth) = &renders[a];
            let mut sum = 0.0;
            let (mut hits, mut misses) = (0, 0);
            for trial in 0..cfg.trials_per_cell {
                let seed = cell_seed(cfg.seed, a, v, trial);
                let frame = add_noise(clean, cfg.noise_variances[v], seed);
                match measure(&frame, *truth)? {
                    Some(e) => {
                        sum += e;
                        hits += 1;
                    }
                    None => misses += 1,
                }
            }
            let mean = if hits > 0 { sum / hits as f64 } else { f64::NAN };
            Ok((mean, hits, misses))
        })
        .collect::<Result<_>>()?;
    Ok(ErrorGrid {
        angles: cfg.angles.clone(),
        noise_variances: cfg.noise_variances.clone(),
        mean_error: cells.iter().map(|c| c.0).collect(),
        trials: cells.iter().map(|c| c.1).collect(),
        misses: cells.iter().map(|c| c.2).collect(),
    })
}

/// Localization error of the strongest connected response.
pub fn run_sweep(cfg: &SweepConfig) -> Result<ErrorGrid> {
    if let Detector::Ptam { .. } = cfg.detector {
        return Err(Error::invalid("ptam has a binary output; use the binary sweep"));
    }
    sweep_with(cfg, |frame, truth| {
        Ok(locate(frame, cfg.detector, cfg.localization)?.map(|p| distance(p, truth)))
    })
}

/// Binary corner map for the comparison: PTAM as is, ChESS thresholded at
/// [`BINARY_THRESHOLD`] of its largest positive response. Both see the
/// frame after a σ = 1 Gaussian blur.
pub fn binary_map(frame: &GrayImage, detector: Detector) -> Result<Plane<bool>> {
    match detector {
        Detector::Ptam { gate } => ptam_detect(
            frame,
            &PtamParams {
                gate,
                pre_blur_sigma: BINARY_BLUR_SIGMA,
            },
        ),
        Detector::Chess => {
            let blurred = gaussian_blur(frame, BINARY_BLUR_SIGMA)?;
            let resp = detect(&blurred, &RingGeometry::radius5())?;
            let max = resp.data().iter().copied().max().unwrap_or(0);
            if max <= 0 {
                return Ok(resp.map(|_| false));
            }
            let thresh = BINARY_THRESHOLD * max as f64;
            Ok(resp.map(|v| v > 0 && v as f64 >= thresh))
        }
        other => Err(Error::invalid(format!(
            "binary sweep supports chess and ptam, not {other}"
        ))),
    }
}

/// Distance from `truth` to the nearest `true` pixel, capped.
pub fn nearest_detection(map: &Plane<bool>, truth: (f64, f64), cap: f64) -> f64 {
    let r = cap.ceil() as i64 + 1;
    let (cx, cy) = (truth.0.round() as i64, truth.1.round() as i64);
    let mut best = cap;
    for y in cy - r..=cy + r {
        for x in cx - r..=cx + r {
            if map.get_checked(x, y) == Some(true) {
                best = best.min(distance((x as f64, y as f64), truth));
            }
        }
    }
    best
}

/// Nearest-detection distance grid for PTAM or thresholded ChESS, grid
/// aligned vertices only. Empty maps record the cap.
pub fn run_binary_sweep(cfg: &SweepConfig) -> Result<ErrorGrid> {
    if cfg.offset_mode != OffsetMode::GridAligned {
        return Err(Error::invalid("the binary sweep uses grid aligned vertices only"));
    }
    if !matches!(cfg.detector, Detector::Chess | Detector::Ptam { .. }) {
        return Err(Error::invalid(format!(
            "binary sweep supports chess and ptam, not {}",
            cfg.detector
        )));
    }
    sweep_with(cfg, |frame, truth| {
        let map = binary_map(frame, cfg.detector)?;
        Ok(Some(nearest_detection(&map, truth, BINARY_CAP_PX)))
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BenchResult {
    pub loops: usize,
    pub total: Duration,
}

impl BenchResult {
    pub fn seconds(&self) -> f64 {
        self.total.as_secs_f64()
    }

    pub fn frames_per_second(&self) -> f64 {
        self.loops as f64 / self.seconds()
    }

    pub fn ms_per_frame(&self) -> f64 {
        1e3 * self.seconds() / self.loops as f64
    }
}

/// Runs one detector once on `frame`, single-threaded, with its default
/// parameters (PTAM includes its σ = 1 pre-blur).
pub fn run_detector_once(detector: Detector, frame: &GrayImage) -> Result<()> {
    let geom = RingGeometry::radius5();
    match detector {
        Detector::Chess => {
            black_box(detect(frame, &geom)?);
        }
        Detector::ChessBlur5 => {
            black_box(detect(&pre_blur(frame, BlurKernel::Gauss5), &geom)?);
        }
        Detector::Harris => {
            black_box(harris_detect(frame, &HarrisParams::default())?);
        }
        Detector::HarrisNoBlur => {
            black_box(harris_detect(frame, &HarrisParams::without_blur())?);
        }
        Detector::Ptam { gate } => {
            black_box(ptam_detect(frame, &PtamParams { gate, ..PtamParams::default() })?);
        }
    }
    Ok(())
}

/// Wall time of `loops` full-frame detections after one untimed warm-up.
pub fn benchmark(detector: Detector, frame: &GrayImage, loops: usize) -> Result<BenchResult> {
    if loops == 0 {
        return Err(Error::invalid("loops must be at least 1"));
    }
    run_detector_once(detector, frame)?;
    let start = Instant::now();
    for _ in 0..loops {
        run_detector_once(detector, black_box(frame))?;
    }
    Ok(BenchResult {
        loops,
        total: start.elapsed(),
    })
}

/// The fixed benchmark frame: a VGA board with mild noise.
pub fn benchmark_frame() -> Result<GrayImage> {
    let spec = SynthSpec {
        angle: 20.0,
        noise_variance: 2.0,
        seed: 1,
        ..SynthSpec::default()
    };
    Ok(crate::synth::render_board(&spec, 9, 11, 40)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(detector: Detector) -> SweepConfig {
        SweepConfig {
            angles: vec![0.0, 30.0],
            noise_variances: vec![0.0, 2.0],
            detector,
            trials_per_cell: 2,
            width: 96,
            height: 80,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn default_grid() {
        let cfg = SweepConfig::default();
        assert_eq!(cfg.angles.len(), 37);
        assert_eq!(cfg.noise_variances.len(), 21);
        assert_eq!(cfg.angles[36], 90.0);
        assert_eq!(cfg.noise_variances[20], 10.0);
        assert_eq!(cfg.trials_per_cell, 5);
    }

    #[test]
    fn names_round_trip() {
        for d in [
            Detector::Chess,
            Detector::ChessBlur5,
            Detector::Harris,
            Detector::HarrisNoBlur,
            Detector::Ptam { gate: 20 },
        ] {
            assert_eq!(Detector::parse(&d.name()).unwrap(), d);
        }
        assert_eq!(Detector::parse("ptam").unwrap(), Detector::Ptam { gate: 10 });
        assert!(Detector::parse("susan").is_err());
        assert!(Detector::parse("ptam:0").is_err());
        for l in [Localization::IntegerArgmax, Localization::Com5x5] {
            assert_eq!(Localization::parse(l.name()).unwrap(), l);
        }
    }

    #[test]
    fn invalid_configs() {
        let mut cfg = small(Detector::Chess);
        cfg.angles.clear();
        assert!(run_sweep(&cfg).is_err());
        let mut cfg = small(Detector::Chess);
        cfg.trials_per_cell = 0;
        assert!(run_sweep(&cfg).is_err());
        let mut cfg = small(Detector::Chess);
        cfg.noise_variances = vec![-1.0];
        assert!(run_sweep(&cfg).is_err());
        assert!(run_sweep(&small(Detector::Ptam { gate: 10 })).is_err());
        assert!(run_binary_sweep(&small(Detector::Harris)).is_err());
        let mut cfg = small(Detector::Chess);
        cfg.offset_mode = OffsetMode::HalfPixel;
        assert!(run_binary_sweep(&cfg).is_err());
    }

    #[test]
    fn noiseless_argmax_is_within_a_pixel() {
        for (mode, limit) in [(OffsetMode::GridAligned, 1.0), (OffsetMode::HalfPixel, 2f64.sqrt())] {
            let cfg = SweepConfig { offset_mode: mode, ..small(Detector::Chess) };
            let grid = run_sweep(&cfg).unwrap();
            for a in 0..2 {
                assert!(grid.error(a, 0) <= limit, "{mode:?} {}", grid.error(a, 0));
                assert_eq!(grid.trials_at(a, 0), 2);
            }
        }
    }

    #[test]
    fn sweep_is_reproducible() {
        let cfg = small(Detector::Harris);
        let a = run_sweep(&cfg).unwrap().to_csv();
        assert_eq!(a, run_sweep(&cfg).unwrap().to_csv());
        assert!(a.starts_with("angle_deg,noise_var,mean_error_px,trials\n"));
        assert_eq!(a.lines().count(), 5);
    }

    #[test]
    fn seeds_differ_between_cells() {
        let mut seen = std::collections::HashSet::new();
        for a in 0..5 {
            for v in 0..5 {
                for t in 0..5 {
                    assert!(seen.insert(cell_seed(7, a, v, t)));
                }
            }
        }
    }

    #[test]
    fn binary_noiseless_chess_is_close() {
        let grid = run_binary_sweep(&small(Detector::Chess)).unwrap();
        assert!(grid.error(0, 0) <= 1.0);
        assert!(grid.error(1, 0) <= 1.0);
    }

    #[test]
    fn empty_map_records_the_cap() {
        let map = Plane::filled(40, 40, false);
        assert_eq!(nearest_detection(&map, (20.5, 20.5), BINARY_CAP_PX), BINARY_CAP_PX);
        let mut map = map;
        map.set(23, 24, true);
        assert!((nearest_detection(&map, (20.0, 20.0), 5.0) - 5.0).abs() < 1e-12);
        map.set(21, 20, true);
        assert_eq!(nearest_detection(&map, (20.0, 20.0), 5.0), 1.0);
    }

    #[test]
    fn noise_tolerance_reads_the_prefix() {
        let grid = ErrorGrid {
            angles: vec![0.0],
            noise_variances: vec![0.0, 1.0, 2.0, 3.0],
            mean_error: vec![0.2, 0.5, 1.5, 0.3],
            trials: vec![1; 4],
            misses: vec![0; 4],
        };
        assert_eq!(grid.noise_tolerance(1.0), Some(1.0));
        assert_eq!(grid.noise_tolerance(0.1), None);
    }

    #[test]
    fn benchmark_counts_loops() {
        let frame = GrayImage::filled(64, 64, 100);
        let r = benchmark(Detector::Chess, &frame, 3).unwrap();
        assert_eq!(r.loops, 3);
        assert!(benchmark(Detector::Chess, &frame, 0).is_err());
        assert_eq!(linspace_step(0.0, 1.0, 0.25), vec![0.0, 0.25, 0.5, 0.75, 1.0]);
    }
}
