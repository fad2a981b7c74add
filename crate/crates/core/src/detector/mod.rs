//! Dense ChESS response computation.
//!
//! All arithmetic is exact integer arithmetic on samples widened to `i32`.
//! Because the local mean divides by 5, responses are stored in units of
//! one fifth of an intensity level:
//!
//! ```text
//! R5 = 5·SR − 5·DR − |5·Σring − 16·Σlocal|   ( = 5·R exactly )
//! ```
//!
//! Use [`to_intensity`] to convert a stored value back to `R`.

mod blur;
pub mod reference;

use rayon::prelude::*;

pub use blur::{gaussian_blur, pre_blur, BlurKernel};

use crate::ring::{LocalSamples, RingGeometry, SampleVector};
use crate::{Error, GrayImage, Plane, Result};

/// ChESS responses aligned with a source image, in units of 1/5 intensity.
/// Pixels inside the ring margin hold 0.
pub type ResponseImage = Plane<i32>;

/// Factor between stored response values and `R` in intensity units.
pub const RESPONSE_SCALE: i32 = 5;

/// Converts a stored response to intensity units.
#[inline]
pub fn to_intensity(r5: i32) -> f64 {
    r5 as f64 / RESPONSE_SCALE as f64
}

/// `SR = Σ_{n=0..3} |(I_n + I_{n+8}) − (I_{n+4} + I_{n+12})|`
pub fn sum_response(s: &SampleVector) -> i32 {
    (0..4)
        .map(|n| {
            let a = s[n] as i32 + s[n + 8] as i32;
            let b = s[n + 4] as i32 + s[n + 12] as i32;
            (a - b).abs()
        })
        .sum()
}

/// `DR = Σ_{n=0..7} |I_n − I_{n+8}|`
pub fn diff_response(s: &SampleVector) -> i32 {
    (0..8).map(|n| (s[n] as i32 - s[n + 8] as i32).abs()).sum()
}

/// `|ring mean − local mean|`. Evaluated as `|5·Σring − 16·Σlocal| / 80`; the
/// numerator is exact and the single division is correctly rounded.
pub fn mean_response(s: &SampleVector, local: &LocalSamples) -> f64 {
    mean_response_x80(s, local) as f64 / 80.0
}

/// `80 · |ring mean − local mean|`, exact.
pub fn mean_response_x80(s: &SampleVector, local: &LocalSamples) -> i32 {
    let ring: i32 = s.iter().map(|&v| v as i32).sum();
    let centre: i32 = local.iter().map(|&v| v as i32).sum();
    (5 * ring - 16 * centre).abs()
}

/// Overall response from gathered samples, in fifths (`5·R`).
pub fn combine(s: &SampleVector, local: &LocalSamples) -> i32 {
    RESPONSE_SCALE * (sum_response(s) - diff_response(s)) - mean_response_x80(s, local)
}

/// Response at one pixel, in fifths. Fails inside the margin band.
pub fn response_at(image: &GrayImage, x: i64, y: i64, geom: &RingGeometry) -> Result<i32> {
    let s = geom.sample(image, x, y)?;
    let l = geom.sample_local(image, x, y)?;
    Ok(combine(&s, &l))
}

fn check_size(image: &GrayImage, geom: &RingGeometry) -> Result<()> {
    let min = 2 * geom.margin() + 1;
    if image.width() < min || image.height() < min {
        return Err(Error::ImageTooSmall {
            width: image.width(),
            height: image.height(),
            min_width: min,
            min_height: min,
        });
    }
    Ok(())
}

/// Full-frame response, single-threaded.
pub fn detect(image: &GrayImage, geom: &RingGeometry) -> Result<ResponseImage> {
    check_size(image, geom)?;
    let mut out = ResponseImage::new(image.width(), image.height());
    let m = geom.margin();
    let w = image.width();
    for (y, row) in out.data_mut().chunks_exact_mut(w).enumerate() {
        if y >= m && y + m < image.height() {
            response_row(image, geom, y, row);
        }
    }
    Ok(out)
}

/// Same output as [`detect`], with rows distributed over the rayon pool.
pub fn detect_parallel(image: &GrayImage, geom: &RingGeometry) -> Result<ResponseImage> {
    check_size(image, geom)?;
    let mut out = ResponseImage::new(image.width(), image.height());
    let m = geom.margin();
    let w = image.width();
    out.data_mut()
        .par_chunks_exact_mut(w)
        .enumerate()
        .for_each(|(y, row)| {
            if y >= m && y + m < image.height() {
                response_row(image, geom, y, row);
            }
        });
    Ok(out)
}

/// Fills the valid span of one output row. Each ring offset becomes a
/// contiguous input slice of equal length, so the inner loop is a straight
/// pass over 21 slices with no per-pixel address arithmetic.
fn response_row(image: &GrayImage, geom: &RingGeometry, y: usize, out: &mut [i32]) {
    let m = geom.margin();
    let w = image.width();
    let n = w - 2 * m;
    let span = |(dx, dy): (i32, i32)| -> &[u8] {
        let row = image.row((y as i64 + dy as i64) as usize);
        let start = (m as i64 + dx as i64) as usize;
        &row[start..start + n]
    };
    let r: [&[u8]; 16] = geom.offsets().map(span);
    let l: [&[u8]; 5] = geom.local_offsets().map(span);
    let out = &mut out[m..m + n];

    // Re-slicing to a common length lets the compiler drop bounds checks.
    let (r0, r1, r2, r3) = (&r[0][..n], &r[1][..n], &r[2][..n], &r[3][..n]);
    let (r4, r5, r6, r7) = (&r[4][..n], &r[5][..n], &r[6][..n], &r[7][..n]);
    let (r8, r9, r10, r11) = (&r[8][..n], &r[9][..n], &r[10][..n], &r[11][..n]);
    let (r12, r13, r14, r15) = (&r[12][..n], &r[13][..n], &r[14][..n], &r[15][..n]);
    let (l0, l1, l2, l3, l4) = (&l[0][..n], &l[1][..n], &l[2][..n], &l[3][..n], &l[4][..n]);

    for i in 0..n {
        let s = |a: &[u8]| a[i] as i32;
        // opposite-pair sums
        let p0 = s(r0) + s(r8);
        let p1 = s(r1) + s(r9);
        let p2 = s(r2) + s(r10);
        let p3 = s(r3) + s(r11);
        let p4 = s(r4) + s(r12);
        let p5 = s(r5) + s(r13);
        let p6 = s(r6) + s(r14);
        let p7 = s(r7) + s(r15);
        let sr = (p0 - p4).abs() + (p1 - p5).abs() + (p2 - p6).abs() + (p3 - p7).abs();
        let dr = (s(r0) - s(r8)).abs()
            + (s(r1) - s(r9)).abs()
            + (s(r2) - s(r10)).abs()
            + (s(r3) - s(r11)).abs()
            + (s(r4) - s(r12)).abs()
            + (s(r5) - s(r13)).abs()
            + (s(r6) - s(r14)).abs()
            + (s(r7) - s(r15)).abs();
        let ring = p0 + p1 + p2 + p3 + p4 + p5 + p6 + p7;
        let local = s(l0) + s(l1) + s(l2) + s(l3) + s(l4);
        out[i] = 5 * (sr - dr) - (5 * ring - 16 * local).abs();
    }
}
