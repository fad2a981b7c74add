//! Eight-bin orientation labels from the ring samples of a feature.
//!
//! `M_n = (I_n + I_{n+8}) − (I_{n+4} + I_{n+12})` for `n = 0..3` are the
//! signed terms of the sum response. Each is averaged with its neighbours,
//! `3·AM_n = M_{n−1} + M_n + M_{n+1}`, where the wrap from index 3 to 0 flips
//! the sign (`M_4 = −M_0`). The bin is `i = argmax |AM_n|`, moved to `i + 4`
//! when `M_i` is negative.
//!
//! With the ring order of [`crate::ring`], rotating a feature by +22.5° in
//! image coordinates (clockwise on screen) advances the bin by one.

use crate::ring::{RingGeometry, SampleVector};
use crate::select::Feature;
use crate::{Error, GrayImage, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OrientationMeasures {
    pub m: [i32; 4],
    /// `3·AM_n`, kept integral.
    pub am3: [i32; 4],
    pub bin: u8,
}

pub fn measures(s: &SampleVector) -> [i32; 4] {
    std::array::from_fn(|n| {
        (s[n] as i32 + s[n + 8] as i32) - (s[n + 4] as i32 + s[n + 12] as i32)
    })
}

/// All intermediate quantities. Fails when every `AM_n` is zero.
pub fn orientation_measures(s: &SampleVector) -> Result<OrientationMeasures> {
    let m = measures(s);
    let am3: [i32; 4] = std::array::from_fn(|n| {
        let prev = if n == 0 { -m[3] } else { m[n - 1] };
        let next = if n == 3 { -m[0] } else { m[n + 1] };
        prev + m[n] + next
    });
    // first index wins ties
    let mut i = 0;
    for n in 1..4 {
        if am3[n].abs() > am3[i].abs() {
            i = n;
        }
    }
    if am3[i] == 0 {
        return Err(Error::NoOrientation);
    }
    let bin = if m[i] < 0 { i + 4 } else { i } as u8;
    Ok(OrientationMeasures { m, am3, bin })
}

pub fn orientation_bin(s: &SampleVector) -> Result<u8> {
    orientation_measures(s).map(|o| o.bin)
}

/// Fills `orientation_bin` for each feature from the ring at its integer
/// peak. Features whose samples carry no orientation are left unset.
pub fn label_orientations(image: &GrayImage, features: &mut [Feature], geom: &RingGeometry) -> Result<()> {
    for f in features.iter_mut() {
        let s = geom.sample(image, f.peak.0 as i64, f.peak.1 as i64)?;
        f.orientation_bin = orientation_bin(&s).ok();
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const CORNER: SampleVector = [255, 255, 255, 255, 0, 0, 0, 0, 255, 255, 255, 255, 0, 0, 0, 0];

    fn rotate(s: &SampleVector, k: usize) -> SampleVector {
        std::array::from_fn(|n| s[(n + 16 - k) % 16])
    }

    #[test]
    fn measure_examples() {
        assert_eq!(measures(&CORNER), [510, 510, 510, 510]);
        assert_eq!(measures(&rotate(&CORNER, 4)), [-510; 4]);
        assert_eq!(measures(&[9; 16]), [0; 4]);
    }

    #[test]
    fn sum_response_is_sum_of_absolute_measures() {
        let s: SampleVector = std::array::from_fn(|n| (n * 37 % 256) as u8);
        let sr: i32 = measures(&s).iter().map(|m| m.abs()).sum();
        assert_eq!(sr, crate::detector::sum_response(&s));
    }

    #[test]
    fn uniform_has_no_orientation() {
        assert!(matches!(orientation_bin(&[40; 16]), Err(Error::NoOrientation)));
    }

    #[test]
    fn corner_bin_and_wrap() {
        // M = (510, 510, 510, 510): 3AM = (510, 1530, 1530, 510) → i = 1.
        let o = orientation_measures(&CORNER).unwrap();
        assert_eq!(o.am3, [510, 1530, 1530, 510]);
        assert_eq!(o.bin, 1);
    }

    /// A two-cycle cosine pattern rotated by k ring steps moves the bin by k.
    #[test]
    fn cosine_pattern_steps_through_bins() {
        let base: SampleVector = std::array::from_fn(|n| {
            let phase = 2.0 * std::f64::consts::PI * 2.0 * n as f64 / 16.0;
            (128.0 + 100.0 * phase.cos()).round() as u8
        });
        let b0 = orientation_bin(&base).unwrap();
        for k in 0..8 {
            let b = orientation_bin(&rotate(&base, k)).unwrap();
            assert_eq!(b, (b0 + k as u8) % 8, "shift {k}");
        }
    }

    proptest! {
        #[test]
        fn inversion_moves_bin_by_four(s in proptest::array::uniform16(any::<u8>())) {
            // a zero winning measure has no sign to flip
            let ok = orientation_bin(&s).ok().filter(|&b| measures(&s)[(b % 4) as usize] != 0);
            if let Some(b) = ok {
                let inv = s.map(|v| 255 - v);
                prop_assert_eq!(orientation_bin(&inv).unwrap(), (b + 4) % 8);
            }
        }

        #[test]
        fn half_turn_keeps_bin(s in proptest::array::uniform16(any::<u8>())) {
            if let Ok(b) = orientation_bin(&s) {
                prop_assert_eq!(orientation_bin(&rotate(&s, 8)).unwrap(), b);
            }
        }
    }
}
