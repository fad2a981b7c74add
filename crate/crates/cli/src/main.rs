//! `chess`: render synthetic vertices, run the detector, sweep accuracy,
//! time detectors and fit planes or cylinders to point clouds.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use chess_core::detector::pre_blur;
use chess_core::geomfit::{fit_cylinder, fit_plane_tls, CylinderFit, Vec3};
use chess_core::imageio::{load_pgm, read_xyz, save_pgm};
use chess_core::orient::label_orientations;
use chess_core::sweep::{
    benchmark, benchmark_frame, linspace_step, run_binary_sweep, run_sweep, Detector, Localization,
    SweepConfig,
};
use chess_core::synth::{parse_blur, render_board, render_vertex, OffsetMode, SynthSpec};
use chess_core::detector::detect_parallel;
use chess_core::{select_features, RingGeometry, SelectConfig};
use clap::{Args, Parser, Subcommand};

#[derive(Parser)]
#[command(name = "chess", version, about = "ChESS chess-board vertex detector toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Localization error over a rotation × noise grid (CSV).
    Sweep(SweepArgs),
    /// Nearest-detection distance for binary detectors: ptam[:gate] or thresholded chess (CSV).
    BinarySweep(SweepArgs),
    /// Time full-frame detection.
    Bench(BenchArgs),
    /// Render a synthetic vertex or board to PGM; prints ground truth as CSV.
    Render(RenderArgs),
    /// Detect features in a PGM image (CSV: x,y,strength,bin).
    Detect(DetectArgs),
    /// Total least squares plane through an XYZ point cloud.
    FitPlane(FitPlaneArgs),
    /// Cylinder fit to an XYZ point cloud from an initial guess.
    FitCylinder(FitCylinderArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// Degrees, as start:stop:step or a comma list.
    #[arg(long, default_value = "0:90:2.5")]
    angles: String,
    /// Intensity², as start:stop:step or a comma list.
    #[arg(long, default_value = "0:10:0.5")]
    noise_variances: String,
    /// chess, chess_blur5, harris, harris_noblur or ptam[:gate].
    #[arg(long, default_value = "chess")]
    detector: String,
    /// grid_aligned or half_pixel.
    #[arg(long, default_value = "grid_aligned")]
    offset_mode: String,
    /// integer_argmax or com5x5.
    #[arg(long, default_value = "integer_argmax")]
    localization: String,
    #[arg(long, default_value_t = 5)]
    trials_per_cell: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 640)]
    width: usize,
    #[arg(long, default_value_t = 480)]
    height: usize,
    /// Write CSV here instead of stdout.
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Comma list of detectors.
    #[arg(long, default_value = "chess,harris,ptam")]
    detectors: String,
    #[arg(long, default_value_t = 500)]
    loops: usize,
    /// PGM frame to time; defaults to a rendered VGA board.
    #[arg(long)]
    input: Option<PathBuf>,
}

#[derive(Args)]
struct RenderArgs {
    /// Flat key = value spec file; flags below override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    angle: Option<f64>,
    #[arg(long)]
    offset_mode: Option<String>,
    #[arg(long)]
    dark: Option<u8>,
    #[arg(long)]
    light: Option<u8>,
    #[arg(long)]
    noise_variance: Option<f64>,
    #[arg(long)]
    seed: Option<u64>,
    /// none, gauss3, gauss5 or sigma:<s>.
    #[arg(long)]
    blur: Option<String>,
    #[arg(long)]
    width: Option<usize>,
    #[arg(long)]
    height: Option<usize>,
    /// Render a ROWSxCOLS board instead of a single vertex.
    #[arg(long)]
    board: Option<String>,
    #[arg(long, default_value_t = 40)]
    square: usize,
    #[arg(long, short)]
    output: PathBuf,
}

#[derive(Args)]
struct DetectArgs {
    input: PathBuf,
    /// Ring radius, 5 or 10.
    #[arg(long, default_value_t = 5)]
    radius: u32,
    /// Pre-blur: none, gauss3, gauss5 or sigma:<s>.
    #[arg(long, default_value = "none")]
    blur: String,
    #[arg(long, default_value_t = 5)]
    nms_window: usize,
    #[arg(long, default_value_t = 64)]
    neighbourhood_area: usize,
    #[arg(long, default_value_t = 0.1)]
    neighbourhood_proportion: f64,
    /// Keep isolated single-pixel responses.
    #[arg(long)]
    no_connectivity: bool,
    /// Label features with orientation bins.
    #[arg(long)]
    orient: bool,
    /// Keep only features at least this strong.
    #[arg(long, default_value_t = 0.0)]
    min_strength: f64,
    #[arg(long, short)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct FitPlaneArgs {
    input: PathBuf,
}

#[derive(Args)]
struct FitCylinderArgs {
    input: PathBuf,
    /// Initial axis point x,y,z.
    #[arg(long)]
    center: String,
    /// Initial axis direction x,y,z.
    #[arg(long)]
    axis: String,
    /// Initial radius.
    #[arg(long)]
    radius: f64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(a) => cmd_sweep(&a, false),
        Command::BinarySweep(a) => cmd_sweep(&a, true),
        Command::Bench(a) => cmd_bench(&a),
        Command::Render(a) => cmd_render(&a),
        Command::Detect(a) => cmd_detect(&a),
        Command::FitPlane(a) => cmd_fit_plane(&a),
        Command::FitCylinder(a) => cmd_fit_cylinder(&a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

/// `start:stop:step` inclusive, or a comma-separated list.
fn parse_list(s: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(':').collect();
    let values = match parts.as_slice() {
        [start, stop, step] => {
            let (start, stop, step): (f64, f64, f64) = (
                start.trim().parse()?,
                stop.trim().parse()?,
                step.trim().parse()?,
            );
            if !(step > 0.0) {
                bail!("step must be positive in '{s}'");
            }
            linspace_step(start, stop, step)
        }
        [_] => s
            .split(',')
            .map(|v| v.trim().parse::<f64>().with_context(|| format!("bad number '{v}'")))
            .collect::<Result<_>>()?,
        _ => bail!("expected start:stop:step or a comma list, got '{s}'"),
    };
    if values.is_empty() {
        bail!("'{s}' describes an empty list");
    }
    Ok(values)
}

fn parse_vec3(s: &str) -> Result<Vec3> {
    let v: Vec<f64> = s
        .split(',')
        .map(|c| c.trim().parse::<f64>().with_context(|| format!("bad number '{c}'")))
        .collect::<Result<_>>()?;
    match v.as_slice() {
        [x, y, z] => Ok(Vec3::new(*x, *y, *z)),
        _ => bail!("expected x,y,z, got '{s}'"),
    }
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn cmd_sweep(a: &SweepArgs, binary: bool) -> Result<()> {
    let cfg = SweepConfig {
        angles: parse_list(&a.angles).context("--angles")?,
        noise_variances: parse_list(&a.noise_variances).context("--noise-variances")?,
        detector: Detector::parse(&a.detector)?,
        offset_mode: OffsetMode::parse(&a.offset_mode)?,
        localization: Localization::parse(&a.localization)?,
        trials_per_cell: a.trials_per_cell,
        seed: a.seed,
        width: a.width,
        height: a.height,
    };
    let grid = if binary { run_binary_sweep(&cfg)? } else { run_sweep(&cfg)? };
    if grid.total_misses() > 0 {
        eprintln!("warning: {} trials produced no estimate", grid.total_misses());
    }
    emit(a.output.as_deref(), &grid.to_csv())
}

fn cmd_bench(a: &BenchArgs) -> Result<()> {
    let frame = match &a.input {
        Some(path) => load_pgm(path)?,
        None => benchmark_frame()?,
    };
    let detectors: Vec<Detector> = a
        .detectors
        .split(',')
        .map(Detector::parse)
        .collect::<chess_core::Result<_>>()?;
    let mut results = vec![];
    for d in &detectors {
        results.push((d, benchmark(*d, &frame, a.loops)?));
    }
    let summary: Vec<String> = results
        .iter()
        .map(|(d, r)| format!("{d} {:.3}s", r.seconds()))
        .collect();
    println!(
        "{} loops on {}x{}: {}",
        a.loops,
        frame.width(),
        frame.height(),
        summary.join(", ")
    );
    println!("loops={}", a.loops);
    println!("width={}", frame.width());
    println!("height={}", frame.height());
    for (d, r) in &results {
        let key = d.name().replace(':', "_");
        println!("{key}.total_s={:.6}", r.seconds());
        println!("{key}.ms_per_frame={:.6}", r.ms_per_frame());
        println!("{key}.fps={:.3}", r.frames_per_second());
    }
    Ok(())
}

fn cmd_render(a: &RenderArgs) -> Result<()> {
    let mut spec = match &a.config {
        Some(path) => SynthSpec::from_config(
            &fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?,
        )?,
        None => SynthSpec::default(),
    };
    if let Some(v) = a.angle {
        spec.angle = v;
    }
    if let Some(v) = &a.offset_mode {
        spec.offset_mode = OffsetMode::parse(v)?;
    }
    if let Some(v) = a.dark {
        spec.dark = v;
    }
    if let Some(v) = a.light {
        spec.light = v;
    }
    if let Some(v) = a.noise_variance {
        spec.noise_variance = v;
    }
    if let Some(v) = a.seed {
        spec.seed = v;
    }
    if let Some(v) = &a.blur {
        spec.blur = parse_blur(v)?;
    }
    if let Some(v) = a.width {
        spec.width = v;
    }
    if let Some(v) = a.height {
        spec.height = v;
    }
    let (image, truth) = match &a.board {
        Some(dims) => {
            let (rows, cols) = dims
                .split_once('x')
                .with_context(|| format!("--board expects ROWSxCOLS, got '{dims}'"))?;
            render_board(&spec, rows.trim().parse()?, cols.trim().parse()?, a.square)?
        }
        None => {
            let (image, v) = render_vertex(&spec)?;
            (image, vec![v])
        }
    };
    save_pgm(&image, &a.output)?;
    let mut out = String::from("x,y\n");
    for (x, y) in truth {
        out.push_str(&format!("{x},{y}\n"));
    }
    emit(None, &out)
}

fn cmd_detect(a: &DetectArgs) -> Result<()> {
    let image = load_pgm(&a.input)?;
    let image = match parse_blur(&a.blur)? {
        Some(kernel) => pre_blur(&image, kernel),
        None => image,
    };
    let geom = RingGeometry::new(a.radius)?;
    let resp = detect_parallel(&image, &geom)?;
    let cfg = SelectConfig {
        nms_window: a.nms_window,
        neighbourhood_area: a.neighbourhood_area,
        neighbourhood_proportion: a.neighbourhood_proportion,
        require_connectivity: !a.no_connectivity,
    };
    let mut features = select_features(&resp, &cfg)?;
    features.retain(|f| f.strength >= a.min_strength);
    if a.orient {
        label_orientations(&image, &mut features, &geom)?;
    }
    let mut out = String::from("x,y,strength,bin\n");
    for f in &features {
        let bin = f.orientation_bin.map_or(String::new(), |b| b.to_string());
        out.push_str(&format!("{:.4},{:.4},{},{bin}\n", f.x, f.y, f.strength));
    }
    emit(a.output.as_deref(), &out)
}

fn cmd_fit_plane(a: &FitPlaneArgs) -> Result<()> {
    let points = read_xyz(&a.input)?;
    let fit = fit_plane_tls(&points)?;
    let n = fit.normal;
    let c = fit.centroid;
    println!("plane through {} points, sse {:e}", points.len(), fit.sse);
    println!("points={}", points.len());
    println!("normal={:.12},{:.12},{:.12}", n.x, n.y, n.z);
    println!("centroid={},{},{}", c.x, c.y, c.z);
    println!("sse={:e}", fit.sse);
    Ok(())
}

fn cmd_fit_cylinder(a: &FitCylinderArgs) -> Result<()> {
    let points = read_xyz(&a.input)?;
    let init = CylinderFit::from_axis(parse_vec3(&a.center)?, parse_vec3(&a.axis)?, a.radius)?;
    let fit = fit_cylinder(&points, &init)?;
    let axis = fit.axis();
    println!(
        "cylinder radius {} after {} iterations, cost {:e}",
        fit.r, fit.iterations, fit.residual
    );
    println!("points={}", points.len());
    println!("radius={}", fit.r);
    println!("center={},{},{}", fit.c.x, fit.c.y, fit.c.z);
    println!("axis={:.12},{:.12},{:.12}", axis.x, axis.y, axis.z);
    println!("s={:e}", fit.s);
    println!("cost={:e}", fit.residual);
    println!("iterations={}", fit.iterations);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn list_forms() {
        assert_eq!(parse_list("0:1:0.5").unwrap(), vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_list("3, 7,11").unwrap(), vec![3.0, 7.0, 11.0]);
        assert!(parse_list("0:1").is_err());
        assert!(parse_list("0:1:0").is_err());
        assert!(parse_list("2:1:1").is_err());
        assert!(parse_list("a,b").is_err());
    }

    #[test]
    fn vectors() {
        assert_eq!(parse_vec3("1, 2,3").unwrap(), Vec3::new(1.0, 2.0, 3.0));
        assert!(parse_vec3("1,2").is_err());
    }
}
