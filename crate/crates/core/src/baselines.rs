//! Competitor detectors used by the accuracy and throughput comparisons.
//!
//! - [`harris_detect`]: Harris–Stephens corner measure `det(A) − k·trace(A)²`
//!   with a 5×5 Sobel aperture and a 3×3 box-summed structure tensor.
//! - [`ptam_detect`]: binary ring-transition test on the radius-3 FAST
//!   circle. Thresholds sit `gate` above and below the ring mean; a pixel is
//!   flagged when the ring crosses between the two bands exactly four times
//!   and the centre lies within `gate` of the ring mean. The centre rule is a
//!   reconstruction from the detector's observed behaviour, not a transcription
//!   of its source.

use crate::detector::gaussian_blur;
use crate::{BoolImage, Error, GrayImage, Plane, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct HarrisParams {
    /// Sobel aperture, 3 or 5.
    pub sobel_aperture: usize,
    /// Odd side of the box filter applied to the gradient products.
    pub block_size: usize,
    pub k: f32,
    /// With `false`, gradients are plain central differences `[-1 0 1] / 2`
    /// with no cross-axis smoothing.
    pub pre_blur: bool,
}

impl Default for HarrisParams {
    fn default() -> Self {
        Self {
            sobel_aperture: 5,
            block_size: 3,
            k: 0.04,
            pre_blur: true,
        }
    }
}

impl HarrisParams {
    pub fn without_blur() -> Self {
        Self {
            pre_blur: false,
            ..Self::default()
        }
    }

    /// Width of the zeroed border band.
    pub fn margin(&self) -> usize {
        let grad = if self.pre_blur { self.sobel_aperture / 2 } else { 1 };
        grad + self.block_size / 2
    }

    fn validate(&self) -> Result<()> {
        if self.sobel_aperture != 3 && self.sobel_aperture != 5 {
            return Err(Error::invalid(format!(
                "Sobel aperture must be 3 or 5, got {}",
                self.sobel_aperture
            )));
        }
        if self.block_size == 0 || self.block_size % 2 == 0 {
            return Err(Error::invalid(format!(
                "block size must be odd, got {}",
                self.block_size
            )));
        }
        Ok(())
    }
}

/// Separable gradient kernels `(derivative taps, smoothing taps, scale)`.
/// Scales normalize the derivative of a unit ramp to 1, so a step of height
/// `d` yields gradient magnitudes of order `d`.
fn gradient_kernels(p: &HarrisParams) -> (Vec<f32>, Vec<f32>) {
    match (p.pre_blur, p.sobel_aperture) {
        (false, _) => (vec![-0.5, 0.0, 0.5], vec![1.0]),
        (true, 3) => (
            vec![-1.0 / 8.0, 0.0, 1.0 / 8.0],
            vec![1.0, 2.0, 1.0],
        ),
        _ => (
            [-1.0, -2.0, 0.0, 2.0, 1.0].map(|v| v / 128.0).to_vec(),
            vec![1.0, 4.0, 6.0, 4.0, 1.0],
        ),
    }
}

/// Correlates every row with `taps`; output column `x` covers input
/// `x - r ..= x + r`. Columns within `r` of the border are left at zero.
fn filter_rows(src: &Plane<f32>, taps: &[f32]) -> Plane<f32> {
    let r = taps.len() / 2;
    let w = src.width();
    let mut out = Plane::<f32>::new(w, src.height());
    if w <= 2 * r {
        return out;
    }
    for y in 0..src.height() {
        let input = src.row(y);
        let output = &mut out.row_mut(y)[r..w - r];
        for (k, &t) in taps.iter().enumerate() {
            let shifted = &input[k..k + output.len()];
            for (o, &v) in output.iter_mut().zip(shifted) {
                *o += t * v;
            }
        }
    }
    out
}

/// Column counterpart of [`filter_rows`].
fn filter_cols(src: &Plane<f32>, taps: &[f32]) -> Plane<f32> {
    let r = taps.len() / 2;
    let (w, h) = (src.width(), src.height());
    let mut out = Plane::<f32>::new(w, h);
    if h <= 2 * r {
        return out;
    }
    for y in r..h - r {
        let output = out.row_mut(y);
        for (k, &t) in taps.iter().enumerate() {
            let input = src.row(y + k - r);
            for (o, &v) in output.iter_mut().zip(input) {
                *o += t * v;
            }
        }
    }
    out
}

/// Harris–Stephens response. A border band of [`HarrisParams::margin`]
/// pixels is zero.
pub fn harris_detect(image: &GrayImage, p: &HarrisParams) -> Result<Plane<f32>> {
    p.validate()?;
    let margin = p.margin();
    let min = 2 * margin + 1;
    if image.width() < min || image.height() < min {
        return Err(Error::ImageTooSmall {
            width: image.width(),
            height: image.height(),
            min_width: min,
            min_height: min,
        });
    }
    let (w, h) = (image.width(), image.height());
    let src = image.map(|v| v as f32);
    let (deriv, smooth) = gradient_kernels(p);
    let gx = filter_cols(&filter_rows(&src, &deriv), &smooth);
    let gy = filter_rows(&filter_cols(&src, &deriv), &smooth);
    let grad_margin = margin - p.block_size / 2;

    let mut xx = Plane::<f32>::new(w, h);
    let mut yy = Plane::<f32>::new(w, h);
    let mut xy = Plane::<f32>::new(w, h);
    for y in grad_margin..h - grad_margin {
        let (ix, iy) = (gx.row(y), gy.row(y));
        let span = grad_margin..w - grad_margin;
        for x in span {
            xx.row_mut(y)[x] = ix[x] * ix[x];
            yy.row_mut(y)[x] = iy[x] * iy[x];
            xy.row_mut(y)[x] = ix[x] * iy[x];
        }
    }
    let ones = vec![1.0f32; p.block_size];
    let box_sum = |plane: &Plane<f32>| filter_cols(&filter_rows(plane, &ones), &ones);
    let (sxx, syy, sxy) = (box_sum(&xx), box_sum(&yy), box_sum(&xy));

    let mut out = Plane::<f32>::new(w, h);
    for y in margin..h - margin {
        let (a, b, c) = (sxx.row(y), syy.row(y), sxy.row(y));
        let row = out.row_mut(y);
        for x in margin..w - margin {
            let det = a[x] * b[x] - c[x] * c[x];
            let tr = a[x] + b[x];
            row[x] = det - p.k * tr * tr;
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq)]
pub struct PtamParams {
    /// Half-width of the threshold band around the ring mean.
    pub gate: u8,
    /// Gaussian pre-blur applied inside [`ptam_detect`]; 0 disables it.
    pub pre_blur_sigma: f64,
}

impl Default for PtamParams {
    fn default() -> Self {
        Self {
            gate: 10,
            pre_blur_sigma: 1.0,
        }
    }
}

/// Radius-3 Bresenham circle used by FAST, clockwise from the top.
pub const FAST_RING: [(i32, i32); 16] = [
    (0, -3),
    (1, -3),
    (2, -2),
    (3, -1),
    (3, 0),
    (3, 1),
    (2, 2),
    (1, 3),
    (0, 3),
    (-1, 3),
    (-2, 2),
    (-3, 1),
    (-3, 0),
    (-3, -1),
    (-2, -2),
    (-1, -3),
];

pub const FAST_MARGIN: usize = 3;

/// Counts band changes around the ring. Samples inside the band keep the
/// previous state. The walk starts at the first sample outside the band and
/// returns to it, so the wrap-around is counted once.
pub fn count_transitions(classes: &[i8; 16]) -> u32 {
    let Some(start) = classes.iter().position(|&c| c != 0) else {
        return 0;
    };
    let mut state = classes[start];
    let mut count = 0;
    for k in 1..=16 {
        let c = classes[(start + k) % 16];
        if c != 0 && c != state {
            count += 1;
            state = c;
        }
    }
    count
}

/// Per-pixel test at `(x, y)` given precomputed ring index offsets.
#[inline]
fn ptam_pixel(data: &[u8], idx: usize, offsets: &[isize; 16], gate: i32) -> bool {
    let mut samples = [0i32; 16];
    let mut sum = 0i32;
    for (s, &o) in samples.iter_mut().zip(offsets) {
        *s = data[(idx as isize + o) as usize] as i32;
        sum += *s;
    }
    // Compare in units of 1/16 intensity to keep the mean exact.
    let band = 16 * gate;
    let centre = 16 * data[idx] as i32;
    if (centre - sum).abs() >= band {
        return false;
    }
    let classes = samples.map(|s| {
        let d = 16 * s - sum;
        if d > band {
            1
        } else if d < -band {
            -1
        } else {
            0
        }
    });
    count_transitions(&classes) == 4
}

/// Binary corner map. The margin band is `false`.
pub fn ptam_detect(image: &GrayImage, p: &PtamParams) -> Result<BoolImage> {
    if p.gate == 0 {
        return Err(Error::invalid("PTAM gate must be positive"));
    }
    let min = 2 * FAST_MARGIN + 1;
    if image.width() < min || image.height() < min {
        return Err(Error::ImageTooSmall {
            width: image.width(),
            height: image.height(),
            min_width: min,
            min_height: min,
        });
    }
    let blurred;
    let src = if p.pre_blur_sigma > 0.0 {
        blurred = gaussian_blur(image, p.pre_blur_sigma)?;
        &blurred
    } else {
        image
    };
    let (w, h) = (src.width(), src.height());
    let offsets = FAST_RING.map(|(dx, dy)| dy as isize * w as isize + dx as isize);
    let mut out = BoolImage::new(w, h);
    let data = src.data();
    for y in FAST_MARGIN..h - FAST_MARGIN {
        let row = out.row_mut(y);
        for (x, flag) in row.iter_mut().enumerate().take(w - FAST_MARGIN).skip(FAST_MARGIN) {
            *flag = ptam_pixel(data, y * w + x, &offsets, p.gate as i32);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quadrants(size: usize, dark: u8, light: u8) -> GrayImage {
        let c = size / 2;
        GrayImage::from_fn(size, size, |x, y| if (x < c) == (y < c) { light } else { dark })
    }

    #[test]
    fn harris_defaults() {
        let p = HarrisParams::default();
        assert_eq!((p.sobel_aperture, p.block_size, p.k, p.pre_blur), (5, 3, 0.04, true));
        assert_eq!(p.margin(), 3);
        assert_eq!(HarrisParams::without_blur().margin(), 2);
    }

    #[test]
    fn harris_uniform_is_zero() {
        let img = GrayImage::filled(20, 20, 77);
        for p in [HarrisParams::default(), HarrisParams::without_blur()] {
            assert!(harris_detect(&img, &p).unwrap().data().iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn harris_rejects_bad_params() {
        let img = GrayImage::filled(20, 20, 0);
        let p = HarrisParams { sobel_aperture: 7, ..HarrisParams::default() };
        assert!(harris_detect(&img, &p).is_err());
        let p = HarrisParams { block_size: 2, ..HarrisParams::default() };
        assert!(harris_detect(&img, &p).is_err());
        assert!(matches!(
            harris_detect(&GrayImage::filled(6, 20, 0), &HarrisParams::default()),
            Err(Error::ImageTooSmall { .. })
        ));
    }

    #[test]
    fn harris_axis_edge_is_non_positive() {
        let img = GrayImage::from_fn(30, 30, |x, _| if x < 15 { 64 } else { 191 });
        let r = harris_detect(&img, &HarrisParams::default()).unwrap();
        assert!(r.data().iter().all(|&v| v <= 0.0));
        assert!(r.get(14, 15) < 0.0);
    }

    #[test]
    fn harris_peaks_at_sharp_vertex() {
        let img = quadrants(30, 64, 191);
        let r = harris_detect(&img, &HarrisParams::default()).unwrap();
        let (mut best, mut at) = (f32::MIN, (0, 0));
        for y in 0..30 {
            for x in 0..30 {
                if r.get(x, y) > best {
                    best = r.get(x, y);
                    at = (x, y);
                }
            }
        }
        assert!(best > 0.0);
        // vertex sits at the pixel corner (14.5, 14.5)
        assert!((at.0 as f64 - 14.5).abs() <= 1.0 && (at.1 as f64 - 14.5).abs() <= 1.0, "{at:?}");
    }

    #[test]
    fn harris_quarter_turn_transposes() {
        // a quarter turn of a vertex about its pixel-corner centre equals a
        // transpose followed by a horizontal flip
        let img = GrayImage::from_fn(24, 24, |x, y| ((x * 13 + y * y * 3 + x * y) % 256) as u8);
        let rot = img.transposed().flipped_horizontal();
        let a = harris_detect(&img, &HarrisParams::default()).unwrap();
        let b = harris_detect(&rot, &HarrisParams::default()).unwrap();
        let expect = a.transposed().flipped_horizontal();
        for (u, v) in b.data().iter().zip(expect.data()) {
            assert!((u - v).abs() <= 1e-3 * (1.0 + u.abs()), "{u} vs {v}");
        }
    }

    #[test]
    fn transition_counting() {
        let mut c = [0i8; 16];
        assert_eq!(count_transitions(&c), 0);
        c[..4].fill(1);
        c[8..12].fill(-1);
        assert_eq!(count_transitions(&c), 2);
        let alt: [i8; 16] = std::array::from_fn(|n| if (n / 4) % 2 == 0 { 1 } else { -1 });
        assert_eq!(count_transitions(&alt), 4);
        // in-band samples between runs do not add transitions
        let mut gaps = alt;
        for n in [3, 7, 11, 15] {
            gaps[n] = 0;
        }
        assert_eq!(count_transitions(&gaps), 4);
    }

    #[test]
    fn ptam_uniform_is_false() {
        let img = GrayImage::filled(20, 20, 90);
        let out = ptam_detect(&img, &PtamParams::default()).unwrap();
        assert_eq!(out.count_true(), 0);
    }

    #[test]
    fn ptam_flags_centred_vertex() {
        // vertex on the centre of pixel (15, 15), edges through pixel centres
        let img = GrayImage::from_fn(30, 30, |x, y| {
            if x == 15 || y == 15 {
                128
            } else if (x < 15) == (y < 15) {
                191
            } else {
                64
            }
        });
        let p = PtamParams { gate: 10, pre_blur_sigma: 1.0 };
        let out = ptam_detect(&img, &p).unwrap();
        assert!(out.get(15, 15));
        assert!(out.positions().iter().all(|&(x, y)| x.abs_diff(15) <= 3 && y.abs_diff(15) <= 3));
    }

    #[test]
    fn ptam_rejects_blurred_centre_off_mean() {
        // vertex between pixels: every centre pixel sits well off the ring mean
        let img = crate::detector::pre_blur(&quadrants(30, 64, 191), crate::detector::BlurKernel::Gauss3);
        let p = PtamParams { gate: 10, pre_blur_sigma: 0.0 };
        assert_eq!(ptam_detect(&img, &p).unwrap().count_true(), 0);
    }

    #[test]
    fn ptam_low_contrast_is_rejected() {
        let img = crate::detector::pre_blur(&quadrants(30, 108, 148), crate::detector::BlurKernel::Gauss3);
        let p = PtamParams { gate: 20, pre_blur_sigma: 1.0 };
        assert_eq!(ptam_detect(&img, &p).unwrap().count_true(), 0);
    }

    #[test]
    fn ptam_shift_invariant() {
        let img = GrayImage::from_fn(24, 24, |x, y| ((x * 29 + y * 41 + x * y) % 150) as u8);
        let shifted = img.map(|v| v + 70);
        let p = PtamParams { gate: 10, pre_blur_sigma: 0.0 };
        assert_eq!(ptam_detect(&img, &p).unwrap(), ptam_detect(&shifted, &p).unwrap());
    }

    #[test]
    fn ptam_rejects_zero_gate() {
        let img = GrayImage::filled(20, 20, 0);
        assert!(ptam_detect(&img, &PtamParams { gate: 0, pre_blur_sigma: 0.0 }).is_err());
    }
}
