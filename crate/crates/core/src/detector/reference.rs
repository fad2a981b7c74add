//! Scalar reference: gathers the 21 samples per pixel and evaluates the
//! response term by term. The optimized paths must match it bit for bit.

use super::{check_size, combine, ResponseImage};
use crate::ring::RingGeometry;
use crate::{GrayImage, Result};

pub fn detect(image: &GrayImage, geom: &RingGeometry) -> Result<ResponseImage> {
    check_size(image, geom)?;
    let mut out = ResponseImage::new(image.width(), image.height());
    for y in 0..image.height() {
        for x in 0..image.width() {
            let (xi, yi) = (x as i64, y as i64);
            if geom.contains(image.width(), image.height(), xi, yi) {
                let s = geom.sample(image, xi, yi)?;
                let l = geom.sample_local(image, xi, yi)?;
                out.set(x, y, combine(&s, &l));
            }
        }
    }
    Ok(out)
}
