//! Sampling geometry: the 16-point ring, the 5-pixel centre set and the
//! border margin.
//!
//! Offsets are in image coordinates (x rightward, y downward). The ring starts
//! at `(+r, 0)` and proceeds in order of increasing `atan2(dy, dx)`, which is
//! clockwise as displayed on screen. Index `n + 8` is always the point
//! reflection of index `n`.

use crate::{Error, GrayImage, Result};

/// The 16 ring intensities `I_0..I_15` in ring order.
pub type SampleVector = [u8; 16];

/// The 5 centre intensities used for the local mean.
pub type LocalSamples = [u8; 5];

pub const RING_LEN: usize = 16;
pub const LOCAL_LEN: usize = 5;

// Integer points at radius 5 whose angles alternate between 21.8° and 23.2°
// spacing (atan(2/5) and 45° - atan(2/5)).
const RADIUS5: [(i32, i32); RING_LEN] = [
    (5, 0),
    (5, 2),
    (4, 4),
    (2, 5),
    (0, 5),
    (-2, 5),
    (-4, 4),
    (-5, 2),
    (-5, 0),
    (-5, -2),
    (-4, -4),
    (-2, -5),
    (0, -5),
    (2, -5),
    (4, -4),
    (5, -2),
];

const LOCAL1: [(i32, i32); LOCAL_LEN] = [(0, 0), (1, 0), (0, 1), (-1, 0), (0, -1)];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RingGeometry {
    offsets: [(i32, i32); RING_LEN],
    local_offsets: [(i32, i32); LOCAL_LEN],
    radius: u32,
    margin: usize,
}

impl RingGeometry {
    /// Builds the ring for a nominal radius of 5 or 10 px. The radius-10 ring
    /// is the radius-5 ring scaled by two, as is its centre set.
    pub fn new(radius: u32) -> Result<Self> {
        let scale = match radius {
            5 => 1,
            10 => 2,
            other => {
                return Err(Error::invalid(format!(
                    "ring radius must be 5 or 10, got {other}"
                )))
            }
        };
        let offsets = RADIUS5.map(|(dx, dy)| (dx * scale, dy * scale));
        let local_offsets = LOCAL1.map(|(dx, dy)| (dx * scale, dy * scale));
        let margin = offsets
            .iter()
            .chain(local_offsets.iter())
            .map(|&(dx, dy)| dx.unsigned_abs().max(dy.unsigned_abs()) as usize)
            .max()
            .unwrap_or(0);
        Ok(Self {
            offsets,
            local_offsets,
            radius,
            margin,
        })
    }

    pub fn radius5() -> Self {
        Self::new(5).expect("radius 5 is supported")
    }

    #[inline]
    pub fn offsets(&self) -> &[(i32, i32); RING_LEN] {
        &self.offsets
    }

    #[inline]
    pub fn local_offsets(&self) -> &[(i32, i32); LOCAL_LEN] {
        &self.local_offsets
    }

    #[inline]
    pub fn radius(&self) -> u32 {
        self.radius
    }

    /// Largest absolute offset component; pixels closer than this to any
    /// border have no defined response.
    #[inline]
    pub fn margin(&self) -> usize {
        self.margin
    }

    /// True if `(x, y)` is at least `margin` px from every border.
    #[inline]
    pub fn contains(&self, width: usize, height: usize, x: i64, y: i64) -> bool {
        let m = self.margin as i64;
        x >= m && y >= m && x + m < width as i64 && y + m < height as i64
    }

    fn check(&self, image: &GrayImage, x: i64, y: i64) -> Result<()> {
        if self.contains(image.width(), image.height(), x, y) {
            Ok(())
        } else {
            Err(Error::OutOfBounds {
                x,
                y,
                margin: self.margin,
                width: image.width(),
                height: image.height(),
            })
        }
    }

    /// Ring intensities around `(x, y)` in ring order.
    pub fn sample(&self, image: &GrayImage, x: i64, y: i64) -> Result<SampleVector> {
        self.check(image, x, y)?;
        Ok(self
            .offsets
            .map(|(dx, dy)| image.get((x + dx as i64) as usize, (y + dy as i64) as usize)))
    }

    /// Centre intensities around `(x, y)`.
    pub fn sample_local(&self, image: &GrayImage, x: i64, y: i64) -> Result<LocalSamples> {
        self.check(image, x, y)?;
        Ok(self
            .local_offsets
            .map(|(dx, dy)| image.get((x + dx as i64) as usize, (y + dy as i64) as usize)))
    }
}

/// `RingGeometry::new`, kept under the operation's conventional name.
pub fn build_ring(radius: u32) -> Result<RingGeometry> {
    RingGeometry::new(radius)
}

pub fn sample_ring(image: &GrayImage, x: i64, y: i64, geom: &RingGeometry) -> Result<SampleVector> {
    geom.sample(image, x, y)
}
