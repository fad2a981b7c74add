//! Separable pre-blur kernels. Borders are clamped to the edge pixel.

use crate::{Error, GrayImage, Result};

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum BlurKernel {
    /// Two passes of `[1 3 1] / 5`.
    Gauss3,
    /// Two passes of `[1 4 6 4 1] / 16`.
    Gauss5,
    /// Sampled Gaussian of the given standard deviation, truncated at 3σ and
    /// renormalized.
    Gaussian { sigma: f64 },
}

/// Integer stencils are applied exactly: the horizontal pass keeps full
/// integer sums and the single division after the vertical pass rounds to
/// nearest, ties away from zero.
pub fn pre_blur(image: &GrayImage, kernel: BlurKernel) -> GrayImage {
    match kernel {
        BlurKernel::Gauss3 => integer_blur(image, &[1, 3, 1]),
        BlurKernel::Gauss5 => integer_blur(image, &[1, 4, 6, 4, 1]),
        BlurKernel::Gaussian { sigma } => {
            gaussian_blur(image, sigma).unwrap_or_else(|_| image.clone())
        }
    }
}

fn integer_blur(image: &GrayImage, taps: &[u32]) -> GrayImage {
    let (w, h) = (image.width(), image.height());
    let radius = taps.len() / 2;
    let norm: u32 = taps.iter().sum::<u32>().pow(2);
    let clamp = |v: isize, hi: usize| v.clamp(0, hi as isize - 1) as usize;

    let mut horizontal = vec![0u32; w * h];
    for y in 0..h {
        let src = image.row(y);
        let dst = &mut horizontal[y * w..(y + 1) * w];
        for (x, out) in dst.iter_mut().enumerate() {
            *out = taps
                .iter()
                .enumerate()
                .map(|(k, &t)| t * src[clamp(x as isize + k as isize - radius as isize, w)] as u32)
                .sum();
        }
    }

    let mut out = GrayImage::new(w, h);
    for y in 0..h {
        let rows: Vec<&[u32]> = (0..taps.len())
            .map(|k| {
                let yy = clamp(y as isize + k as isize - radius as isize, h);
                &horizontal[yy * w..(yy + 1) * w]
            })
            .collect();
        for (x, px) in out.row_mut(y).iter_mut().enumerate() {
            let sum: u32 = taps.iter().zip(&rows).map(|(&t, r)| t * r[x]).sum();
            *px = ((sum + norm / 2) / norm).min(255) as u8;
        }
    }
    out
}

/// Gaussian blur with standard deviation `sigma` (σ = 0 returns a copy).
pub fn gaussian_blur(image: &GrayImage, sigma: f64) -> Result<GrayImage> {
    if !(sigma >= 0.0) || !sigma.is_finite() {
        return Err(Error::invalid(format!("blur sigma must be non-negative, got {sigma}")));
    }
    if sigma == 0.0 {
        return Ok(image.clone());
    }
    let radius = (3.0 * sigma).ceil() as isize;
    let mut taps: Vec<f64> = (-radius..=radius)
        .map(|i| (-(i * i) as f64 / (2.0 * sigma * sigma)).exp())
        .collect();
    let total: f64 = taps.iter().sum();
    taps.iter_mut().for_each(|t| *t /= total);

    let taps: Vec<f32> = taps.into_iter().map(|t| t as f32).collect();
    let r = radius as usize;
    let (w, h) = (image.width(), image.height());
    let mut horizontal = vec![0f32; w * h];
    let mut padded = vec![0f32; w + 2 * r];
    for y in 0..h {
        let src = image.row(y);
        for (i, p) in padded.iter_mut().enumerate() {
            *p = src[i.saturating_sub(r).min(w - 1)] as f32;
        }
        let dst = &mut horizontal[y * w..(y + 1) * w];
        for (k, &t) in taps.iter().enumerate() {
            for (d, &p) in dst.iter_mut().zip(&padded[k..k + w]) {
                *d += t * p;
            }
        }
    }
    let mut out = GrayImage::new(w, h);
    let mut acc = vec![0f32; w];
    for y in 0..h {
        acc.fill(0.0);
        for (k, &t) in taps.iter().enumerate() {
            let yy = (y + k).saturating_sub(r).min(h - 1);
            for (a, &v) in acc.iter_mut().zip(&horizontal[yy * w..(yy + 1) * w]) {
                *a += t * v;
            }
        }
        for (px, &a) in out.row_mut(y).iter_mut().zip(&acc) {
            *px = a.round().clamp(0.0, 255.0) as u8;
        }
    }
    Ok(out)
}
