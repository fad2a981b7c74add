//! Ground-truth rendering of chess-board vertices, boards, edges and stripes.
//!
//! Pipeline: an axis-aligned two-colour pattern is defined on the integer
//! pixel lattice, rotated about a pivot by inverse mapping with bilinear
//! interpolation and quantized to 8 bits; then optionally blurred, then
//! Gaussian noise is added with saturation at 0 and 255.
//!
//! Coordinates use the pixel-centre convention: pixel `(i, j)` covers
//! `[i − ½, i + ½] × [j − ½, j + ½]`. In [`OffsetMode::GridAligned`] the
//! pattern's edges lie on pixel boundaries, so a vertex anchored at pixel
//! `(cx, cy)` sits at `(cx − ½, cy − ½)`. In [`OffsetMode::HalfPixel`] the
//! edges run through pixel centres, those pixels take the mid value 128, and
//! the vertex sits at `(cx, cy)`.
//!
//! A positive angle rotates the pattern by increasing `atan2(dy, dx)` in image
//! coordinates, which is clockwise on screen.
//!
//! Noise uses ChaCha8 with one stream per image row and ziggurat normal
//! sampling, so a pixel's noise depends only on the seed and its position.

use std::fmt::Write as _;

use rand_chacha::ChaCha8Rng;
use rand_core::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use crate::detector::{pre_blur, BlurKernel};
use crate::{Error, GrayImage, Result};

/// Minimum distance of any ground-truth vertex from the image border.
pub const VERTEX_MARGIN: f64 = 10.0;

const MID: f64 = 128.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OffsetMode {
    GridAligned,
    HalfPixel,
}

impl OffsetMode {
    pub fn name(self) -> &'static str {
        match self {
            OffsetMode::GridAligned => "grid_aligned",
            OffsetMode::HalfPixel => "half_pixel",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "grid_aligned" | "grid" => Ok(OffsetMode::GridAligned),
            "half_pixel" | "half" => Ok(OffsetMode::HalfPixel),
            other => Err(Error::invalid(format!("unknown offset mode '{other}'"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SynthSpec {
    /// Rotation in degrees.
    pub angle: f64,
    pub offset_mode: OffsetMode,
    pub dark: u8,
    pub light: u8,
    /// Noise variance in intensity².
    pub noise_variance: f64,
    pub seed: u64,
    pub blur: Option<BlurKernel>,
    pub width: usize,
    pub height: usize,
    /// Integer pixel the vertex is anchored to; defaults to the canvas centre.
    pub anchor: Option<(i64, i64)>,
}

impl Default for SynthSpec {
    fn default() -> Self {
        Self {
            angle: 0.0,
            offset_mode: OffsetMode::GridAligned,
            dark: 64,
            light: 191,
            noise_variance: 0.0,
            seed: 0,
            blur: Some(BlurKernel::Gauss3),
            width: 640,
            height: 480,
            anchor: None,
        }
    }
}

impl SynthSpec {
    fn anchor(&self) -> (i64, i64) {
        self.anchor
            .unwrap_or((self.width as i64 / 2, self.height as i64 / 2))
    }

    /// Exact ground-truth vertex (also the rotation pivot).
    pub fn vertex(&self) -> (f64, f64) {
        let (cx, cy) = self.anchor();
        match self.offset_mode {
            OffsetMode::GridAligned => (cx as f64 - 0.5, cy as f64 - 0.5),
            OffsetMode::HalfPixel => (cx as f64, cy as f64),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dark >= self.light {
            return Err(Error::invalid(format!(
                "dark ({}) must be below light ({})",
                self.dark, self.light
            )));
        }
        if self.width < 64 || self.height < 64 {
            return Err(Error::invalid(format!(
                "canvas {}x{} is smaller than 64x64",
                self.width, self.height
            )));
        }
        if !(self.noise_variance >= 0.0 && self.noise_variance.is_finite()) {
            return Err(Error::invalid(format!(
                "noise variance must be finite and non-negative, got {}",
                self.noise_variance
            )));
        }
        if !self.angle.is_finite() {
            return Err(Error::invalid("angle must be finite"));
        }
        check_inside(self, self.vertex())
    }

    /// Flat `key = value` text form.
    pub fn to_config(&self) -> String {
        let mut s = String::new();
        let blur = match self.blur {
            None => "none".to_string(),
            Some(BlurKernel::Gauss3) => "gauss3".to_string(),
            Some(BlurKernel::Gauss5) => "gauss5".to_string(),
            Some(BlurKernel::Gaussian { sigma }) => format!("sigma:{sigma}"),
        };
        let _ = writeln!(s, "angle = {}", self.angle);
        let _ = writeln!(s, "offset_mode = {}", self.offset_mode.name());
        let _ = writeln!(s, "dark = {}", self.dark);
        let _ = writeln!(s, "light = {}", self.light);
        let _ = writeln!(s, "noise_variance = {}", self.noise_variance);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(s, "blur = {blur}");
        let _ = writeln!(s, "width = {}", self.width);
        let _ = writeln!(s, "height = {}", self.height);
        if let Some((x, y)) = self.anchor {
            let _ = writeln!(s, "anchor = {x},{y}");
        }
        s
    }

    /// Parses the form written by [`SynthSpec::to_config`]. Missing keys keep
    /// their defaults; `#` starts a comment.
    pub fn from_config(text: &str) -> Result<Self> {
        let mut spec = SynthSpec::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::invalid(format!("line {}: expected key = value", lineno + 1)))?;
            let (key, value) = (key.trim(), value.trim());
            let bad = |e: &dyn std::fmt::Display| {
                Error::invalid(format!("line {}: bad value for {key}: {e}", lineno + 1))
            };
            match key {
                "angle" => spec.angle = value.parse().map_err(|e| bad(&e))?,
                "offset_mode" => spec.offset_mode = OffsetMode::parse(value)?,
                "dark" => spec.dark = value.parse().map_err(|e| bad(&e))?,
                "light" => spec.light = value.parse().map_err(|e| bad(&e))?,
                "noise_variance" => spec.noise_variance = value.parse().map_err(|e| bad(&e))?,
                "seed" => spec.seed = value.parse().map_err(|e| bad(&e))?,
                "blur" => spec.blur = parse_blur(value)?,
                "width" => spec.width = value.parse().map_err(|e| bad(&e))?,
                "height" => spec.height = value.parse().map_err(|e| bad(&e))?,
                "anchor" => {
                    let (x, y) = value.split_once(',').ok_or_else(|| bad(&"expected x,y"))?;
                    spec.anchor = Some((
                        x.trim().parse().map_err(|e| bad(&e))?,
                        y.trim().parse().map_err(|e| bad(&e))?,
                    ));
                }
                other => return Err(Error::invalid(format!("unknown key '{other}'"))),
            }
        }
        Ok(spec)
    }
}

pub fn parse_blur(value: &str) -> Result<Option<BlurKernel>> {
    match value {
        "none" => Ok(None),
        "gauss3" => Ok(Some(BlurKernel::Gauss3)),
        "gauss5" => Ok(Some(BlurKernel::Gauss5)),
        other => match other.strip_prefix("sigma:").map(str::parse::<f64>) {
            Some(Ok(sigma)) => Ok(Some(BlurKernel::Gaussian { sigma })),
            _ => Err(Error::invalid(format!("unknown blur '{other}'"))),
        },
    }
}

fn check_inside(spec: &SynthSpec, (x, y): (f64, f64)) -> Result<()> {
    let ok = x >= VERTEX_MARGIN
        && y >= VERTEX_MARGIN
        && x <= spec.width as f64 - 1.0 - VERTEX_MARGIN
        && y <= spec.height as f64 - 1.0 - VERTEX_MARGIN;
    if ok {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "vertex ({x:.3}, {y:.3}) is closer than {VERTEX_MARGIN} px to the border of a {}x{} canvas",
            spec.width, spec.height
        )))
    }
}

/// Axis-aligned source patterns on the integer lattice, before rotation.
/// Lattice coordinates are doubled so half-integer origins stay exact.
#[derive(Clone, Copy, Debug)]
enum Pattern {
    /// Chess-board with `cols`×`rows` squares of side `square`, top-left
    /// corner at `origin2 / 2`. Outer squares extend to infinity.
    Board {
        origin2: (i64, i64),
        square: i64,
        cols: i64,
        rows: i64,
    },
    /// Light where x > `origin2.0 / 2`.
    Edge { origin2: (i64, i64) },
    /// Light band `|y − centre| < width / 2` in doubled units.
    Stripe { centre2: i64, width2: i64 },
}

impl Pattern {
    fn value(&self, i: i64, j: i64, dark: f64, light: f64, half: bool) -> f64 {
        match *self {
            Pattern::Board {
                origin2,
                square,
                cols,
                rows,
            } => {
                let u2 = 2 * i - origin2.0;
                let v2 = 2 * j - origin2.1;
                let side2 = 2 * square;
                let on_line = |w2: i64, n: i64| {
                    half && w2.rem_euclid(side2) == 0 && w2 > 0 && w2 < n * side2
                };
                if on_line(u2, cols) || on_line(v2, rows) {
                    return MID;
                }
                let ci = u2.div_euclid(side2).clamp(0, cols - 1);
                let cj = v2.div_euclid(side2).clamp(0, rows - 1);
                if (ci + cj) % 2 == 0 {
                    light
                } else {
                    dark
                }
            }
            Pattern::Edge { origin2 } => {
                let u2 = 2 * i - origin2.0;
                if half && u2 == 0 {
                    MID
                } else if u2 > 0 {
                    light
                } else {
                    dark
                }
            }
            Pattern::Stripe { centre2, width2 } => {
                let d = (2 * j - centre2).abs();
                if d * 2 < width2 {
                    light
                } else {
                    dark
                }
            }
        }
    }
}

/// Rotates `pattern` by `angle` about `pivot` with bilinear interpolation
/// and quantizes to 8 bits.
fn rasterize(spec: &SynthSpec, pattern: Pattern, pivot: (f64, f64)) -> GrayImage {
    let (sin, cos) = spec.angle.to_radians().sin_cos();
    let (dark, light) = (spec.dark as f64, spec.light as f64);
    let half = spec.offset_mode == OffsetMode::HalfPixel;
    let src = |i: i64, j: i64| pattern.value(i, j, dark, light, half);
    GrayImage::from_fn(spec.width, spec.height, |x, y| {
        let (dx, dy) = (x as f64 - pivot.0, y as f64 - pivot.1);
        let sx = pivot.0 + cos * dx + sin * dy;
        let sy = pivot.1 - sin * dx + cos * dy;
        let (x0, y0) = (sx.floor(), sy.floor());
        let (fx, fy) = (sx - x0, sy - y0);
        let (i, j) = (x0 as i64, y0 as i64);
        let top = src(i, j) * (1.0 - fx) + src(i + 1, j) * fx;
        let bottom = src(i, j + 1) * (1.0 - fx) + src(i + 1, j + 1) * fx;
        let v = top * (1.0 - fy) + bottom * fy;
        v.round().clamp(0.0, 255.0) as u8
    })
}

fn finish(spec: &SynthSpec, image: GrayImage) -> GrayImage {
    let blurred = match spec.blur {
        Some(kernel) => pre_blur(&image, kernel),
        None => image,
    };
    add_noise(&blurred, spec.noise_variance, spec.seed)
}

fn rotate_about(p: (f64, f64), pivot: (f64, f64), angle_deg: f64) -> (f64, f64) {
    let (sin, cos) = angle_deg.to_radians().sin_cos();
    let (dx, dy) = (p.0 - pivot.0, p.1 - pivot.1);
    (pivot.0 + cos * dx - sin * dy, pivot.1 + sin * dx + cos * dy)
}

/// Four-quadrant vertex image. Returns the image and the exact vertex.
pub fn render_vertex(spec: &SynthSpec) -> Result<(GrayImage, (f64, f64))> {
    spec.validate()?;
    let (image, vertices) = board_unchecked(spec, 2, 2, 1)?;
    Ok((image, vertices[0]))
}

/// Same as [`render_vertex`] before blur and noise are applied.
pub fn render_vertex_clean(spec: &SynthSpec) -> Result<GrayImage> {
    spec.validate()?;
    let pivot = spec.vertex();
    let origin2 = ((2.0 * pivot.0) as i64 - 2, (2.0 * pivot.1) as i64 - 2);
    Ok(rasterize(
        spec,
        Pattern::Board {
            origin2,
            square: 1,
            cols: 2,
            rows: 2,
        },
        pivot,
    ))
}

/// `rows`×`cols` chess-board of `square` px squares centred on the spec's
/// vertex and rotated by its angle. The outer squares extend to the image
/// border, so the only vertices are the `(rows−1)·(cols−1)` interior ones,
/// returned in row-major board order.
pub fn render_board(
    spec: &SynthSpec,
    rows: usize,
    cols: usize,
    square: usize,
) -> Result<(GrayImage, Vec<(f64, f64)>)> {
    spec.validate()?;
    if rows < 2 || cols < 2 || square == 0 {
        return Err(Error::invalid(format!(
            "board needs at least 2x2 squares of positive size, got {rows}x{cols} of {square}"
        )));
    }
    let (image, vertices) = board_unchecked(spec, rows, cols, square)?;
    Ok((image, vertices))
}

fn board_unchecked(
    spec: &SynthSpec,
    rows: usize,
    cols: usize,
    square: usize,
) -> Result<(GrayImage, Vec<(f64, f64)>)> {
    let pivot = spec.vertex();
    let (rows, cols, square) = (rows as i64, cols as i64, square as i64);
    let origin = (
        pivot.0 - ((cols * square) / 2) as f64,
        pivot.1 - ((rows * square) / 2) as f64,
    );
    let mut vertices = Vec::with_capacity(((rows - 1) * (cols - 1)) as usize);
    for l in 1..rows {
        for k in 1..cols {
            let p = (origin.0 + (k * square) as f64, origin.1 + (l * square) as f64);
            let v = rotate_about(p, pivot, spec.angle);
            check_inside(spec, v)
                .map_err(|e| Error::invalid(format!("board does not fit the canvas: {e}")))?;
            vertices.push(v);
        }
    }
    let pattern = Pattern::Board {
        origin2: ((2.0 * origin.0) as i64, (2.0 * origin.1) as i64),
        square,
        cols,
        rows,
    };
    Ok((finish(spec, rasterize(spec, pattern, pivot)), vertices))
}

/// Straight edge through the spec's vertex point, dark on the negative side
/// of the rotated x axis. Contains no vertex.
pub fn render_edge(spec: &SynthSpec) -> Result<GrayImage> {
    spec.validate()?;
    let pivot = spec.vertex();
    let pattern = Pattern::Edge {
        origin2: ((2.0 * pivot.0) as i64, (2.0 * pivot.1) as i64),
    };
    Ok(finish(spec, rasterize(spec, pattern, pivot)))
}

/// Light stripe of `width` px on a dark background, running along the rotated
/// x axis and passing through the spec's anchor pixel centre, shifted
/// perpendicular to itself by `offset` px (multiples of ½ are exact).
pub fn render_stripe(spec: &SynthSpec, width: f64, offset: f64) -> Result<GrayImage> {
    spec.validate()?;
    if !(width > 0.0) {
        return Err(Error::invalid(format!("stripe width must be positive, got {width}")));
    }
    let (cx, cy) = spec.anchor();
    let pivot = (cx as f64, cy as f64);
    let pattern = Pattern::Stripe {
        centre2: (2.0 * (cy as f64 + offset)).round() as i64,
        width2: (2.0 * width).round() as i64,
    };
    Ok(finish(spec, rasterize(spec, pattern, pivot)))
}

/// Adds i.i.d. Gaussian noise of the given variance, rounding to nearest and
/// saturating at 0 and 255. Deterministic in `seed`; variance 0 is the
/// identity.
pub fn add_noise(image: &GrayImage, variance: f64, seed: u64) -> GrayImage {
    if !(variance > 0.0) {
        return image.clone();
    }
    let sigma = variance.sqrt();
    let mut out = image.clone();
    for y in 0..out.height() {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(y as u64);
        for px in out.row_mut(y) {
            let z: f64 = StandardNormal.sample(&mut rng);
            *px = (*px as f64 + sigma * z).round().clamp(0.0, 255.0) as u8;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn clean(angle: f64, mode: OffsetMode) -> SynthSpec {
        SynthSpec {
            angle,
            offset_mode: mode,
            blur: None,
            width: 64,
            height: 64,
            ..SynthSpec::default()
        }
    }

    #[test]
    fn axis_aligned_quadrants_are_exact() {
        let spec = clean(0.0, OffsetMode::GridAligned);
        let (img, truth) = render_vertex(&spec).unwrap();
        assert_eq!(truth, (31.5, 31.5));
        for y in 0..64 {
            for x in 0..64 {
                let expect = if (x < 32) == (y < 32) { 191 } else { 64 };
                assert_eq!(img.get(x, y), expect, "({x},{y})");
            }
        }
    }

    #[test]
    fn half_pixel_inserts_mid_row_and_column() {
        let spec = clean(0.0, OffsetMode::HalfPixel);
        let (img, truth) = render_vertex(&spec).unwrap();
        assert_eq!(truth, (32.0, 32.0));
        for k in 0..64 {
            assert_eq!(img.get(32, k), 128);
            assert_eq!(img.get(k, 32), 128);
        }
        assert_eq!(img.get(31, 31), 191);
        assert_eq!(img.get(33, 31), 64);
        assert_eq!(img.get(33, 33), 191);
    }

    #[test]
    fn quarter_turn_matches_rotated_pixels() {
        for mode in [OffsetMode::GridAligned, OffsetMode::HalfPixel] {
            let a = render_vertex(&clean(0.0, mode)).unwrap();
            let b = render_vertex(&clean(90.0, mode)).unwrap();
            let (px, py) = a.1;
            for y in 0..64 {
                for x in 0..64 {
                    // q = R(−90°)(p − pivot) + pivot
                    let (dx, dy) = (x as f64 - px, y as f64 - py);
                    let (qx, qy) = (px + dy, py - dx);
                    if let Some(v) = a.0.get_checked(qx.round() as i64, qy.round() as i64) {
                        assert_eq!(b.0.get(x, y), v);
                    }
                }
            }
        }
    }

    #[test]
    fn noiseless_vertex_is_half_turn_symmetric() {
        for angle in [0.0, 13.0, 32.5, 45.0, 71.3] {
            for mode in [OffsetMode::GridAligned, OffsetMode::HalfPixel] {
                let spec = SynthSpec { blur: Some(BlurKernel::Gauss3), ..clean(angle, mode) };
                let (img, (vx, vy)) = render_vertex(&spec).unwrap();
                for y in 8..56 {
                    for x in 8..56 {
                        let (rx, ry) = (2.0 * vx - x as f64, 2.0 * vy - y as f64);
                        let v = img.get(rx as usize, ry as usize) as i32;
                        assert!((img.get(x, y) as i32 - v).abs() <= 1, "{angle} {mode:?} ({x},{y})");
                    }
                }
            }
        }
    }

    #[test]
    fn noisy_rotated_vertex_histogram_is_bimodal() {
        let spec = SynthSpec {
            angle: 32.5,
            noise_variance: 1.0,
            seed: 7,
            ..SynthSpec::default()
        };
        let (img, _) = render_vertex(&spec).unwrap();
        let near = |c: i32| img.data().iter().filter(|&&v| (v as i32 - c).abs() <= 4).count();
        let total = img.data().len();
        assert!(near(64) > total * 4 / 10);
        assert!(near(191) > total * 4 / 10);
    }

    #[test]
    fn noise_statistics_and_determinism() {
        let base = GrayImage::filled(400, 300, 128);
        assert_eq!(add_noise(&base, 0.0, 5), base);
        let a = add_noise(&base, 4.0, 99);
        assert_eq!(a, add_noise(&base, 4.0, 99));
        assert_ne!(a, add_noise(&base, 4.0, 100));
        let n = a.data().len() as f64;
        let mean = a.data().iter().map(|&v| v as f64).sum::<f64>() / n;
        let var = a.data().iter().map(|&v| (v as f64 - mean).powi(2)).sum::<f64>() / (n - 1.0);
        // rounding to integers adds 1/12 to the variance
        assert!((var - 4.0).abs() < 0.4, "variance {var}");
        assert!((mean - 128.0).abs() < 0.05, "mean {mean}");
    }

    #[test]
    fn noise_saturates() {
        let base = GrayImage::filled(100, 100, 250);
        let out = add_noise(&base, 400.0, 1);
        assert!(out.data().iter().any(|&v| v == 255));
    }

    #[test]
    fn two_by_two_board_is_the_vertex() {
        let spec = SynthSpec { angle: 17.0, noise_variance: 2.0, seed: 3, ..SynthSpec::default() };
        let (v_img, v_truth) = render_vertex(&spec).unwrap();
        let (b_img, b_truth) = render_board(&spec, 2, 2, 30).unwrap();
        assert_eq!(b_truth, vec![v_truth]);
        assert_eq!(b_img, v_img);
    }

    #[test]
    fn board_lattice() {
        let spec = SynthSpec::default();
        let (_, truth) = render_board(&spec, 5, 5, 40).unwrap();
        assert_eq!(truth.len(), 16);
        let (vx, vy) = spec.vertex();
        for (idx, &(x, y)) in truth.iter().enumerate() {
            let (k, l) = ((idx % 4) as f64 + 1.0, (idx / 4) as f64 + 1.0);
            assert_eq!((x, y), (vx - 100.0 + 40.0 * k, vy - 100.0 + 40.0 * l));
        }
    }

    #[test]
    fn rotated_board_lattice() {
        let spec = SynthSpec { angle: 45.0, ..SynthSpec::default() };
        let (_, truth) = render_board(&spec, 5, 5, 40).unwrap();
        let (vx, vy) = spec.vertex();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for (idx, &(x, y)) in truth.iter().enumerate() {
            let (k, l) = ((idx % 4) as f64 + 1.0, (idx / 4) as f64 + 1.0);
            let (dx, dy) = (40.0 * k - 100.0, 40.0 * l - 100.0);
            let expect = (vx + h * (dx - dy), vy + h * (dx + dy));
            assert!((x - expect.0).abs() < 1e-9 && (y - expect.1).abs() < 1e-9);
        }
    }

    #[test]
    fn board_overflow_is_rejected() {
        let spec = SynthSpec::default();
        assert!(render_board(&spec, 20, 20, 40).is_err());
        assert!(render_board(&spec, 1, 3, 40).is_err());
    }

    #[test]
    fn invalid_specs() {
        let bad = [
            SynthSpec { dark: 191, light: 64, ..SynthSpec::default() },
            SynthSpec { width: 32, ..SynthSpec::default() },
            SynthSpec { noise_variance: -1.0, ..SynthSpec::default() },
            SynthSpec { anchor: Some((3, 3)), ..SynthSpec::default() },
        ];
        for spec in bad {
            assert!(render_vertex(&spec).is_err(), "{spec:?}");
        }
    }

    #[test]
    fn config_round_trip() {
        let spec = SynthSpec {
            angle: 32.5,
            offset_mode: OffsetMode::HalfPixel,
            noise_variance: 1.5,
            seed: 42,
            blur: Some(BlurKernel::Gaussian { sigma: 1.0 }),
            anchor: Some((300, 200)),
            ..SynthSpec::default()
        };
        assert_eq!(SynthSpec::from_config(&spec.to_config()).unwrap(), spec);
        assert!(SynthSpec::from_config("colour = red").is_err());
        assert!(SynthSpec::from_config("angle 3").is_err());
    }

    #[test]
    fn stripe_and_edge_shapes() {
        let spec = clean(0.0, OffsetMode::GridAligned);
        let img = render_stripe(&spec, 3.0, 0.0).unwrap();
        assert_eq!(img.get(10, 32), 191);
        assert_eq!(img.get(10, 31), 191);
        assert_eq!(img.get(10, 33), 191);
        assert_eq!(img.get(10, 34), 64);
        let edge = render_edge(&spec).unwrap();
        assert_eq!(edge.get(31, 10), 64);
        assert_eq!(edge.get(32, 10), 191);
    }
}
