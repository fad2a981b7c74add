//! Feature selection on a response image: positive threshold, non-maximum
//! suppression, connectivity, neighbourhood comparison and 5×5 centre-of-mass
//! refinement, applied in that order.
//!
//! The stages are generic over the response element type so the same code
//! serves ChESS (`i32`, fifths of an intensity) and Harris (`f32`) planes.

use std::collections::HashMap;

use crate::detector::RESPONSE_SCALE;
use crate::{BoolImage, Error, Plane, Result};

/// Element type of a response plane.
pub trait ResponseValue: Copy + PartialOrd + Default + Send + Sync {
    fn is_positive(self) -> bool;
    /// Value in the detector's natural strength unit. ChESS planes (`i32`)
    /// are stored in fifths and are converted back to intensity units.
    fn strength(self) -> f64;
}

impl ResponseValue for i32 {
    #[inline]
    fn is_positive(self) -> bool {
        self > 0
    }
    #[inline]
    fn strength(self) -> f64 {
        self as f64 / RESPONSE_SCALE as f64
    }
}

impl ResponseValue for f32 {
    #[inline]
    fn is_positive(self) -> bool {
        self > 0.0
    }
    #[inline]
    fn strength(self) -> f64 {
        self as f64
    }
}

impl ResponseValue for f64 {
    #[inline]
    fn is_positive(self) -> bool {
        self > 0.0
    }
    #[inline]
    fn strength(self) -> f64 {
        self
    }
}

/// Integer pixel position of a candidate maximum.
pub type Peak = (usize, usize);

#[derive(Clone, Debug, PartialEq)]
pub struct Feature {
    /// Sub-pixel position, pixel-centre convention.
    pub x: f64,
    pub y: f64,
    /// Integer maximum that produced the feature.
    pub peak: Peak,
    /// Response at `peak`.
    pub strength: f64,
    /// Set by [`crate::orient::label_orientations`].
    pub orientation_bin: Option<u8>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SelectConfig {
    /// Odd side length of the NMS window.
    pub nms_window: usize,
    /// Tile side used by the neighbourhood comparison.
    pub neighbourhood_area: usize,
    /// Candidates weaker than this fraction of the strongest nearby
    /// candidate are dropped.
    pub neighbourhood_proportion: f64,
    pub require_connectivity: bool,
}

impl Default for SelectConfig {
    fn default() -> Self {
        Self {
            nms_window: 5,
            neighbourhood_area: 64,
            neighbourhood_proportion: 0.1,
            require_connectivity: true,
        }
    }
}

impl SelectConfig {
    pub fn validate(&self) -> Result<()> {
        if self.nms_window < 3 || self.nms_window % 2 == 0 {
            return Err(Error::invalid(format!(
                "nms_window must be odd and >= 3, got {}",
                self.nms_window
            )));
        }
        if self.neighbourhood_area == 0 {
            return Err(Error::invalid("neighbourhood_area must be positive"));
        }
        let p = self.neighbourhood_proportion;
        if !(p > 0.0 && p <= 1.0) {
            return Err(Error::invalid(format!(
                "neighbourhood_proportion must lie in (0, 1], got {p}"
            )));
        }
        Ok(())
    }
}

pub fn positive_mask<T: ResponseValue>(resp: &Plane<T>) -> BoolImage {
    resp.map(T::is_positive)
}

/// Positive local maxima in a centred `window`×`window` neighbourhood,
/// in row-major order.
///
/// A pixel survives if it is strictly greater than every other pixel in the
/// window, except that an equal-valued pixel later in row-major order does
/// not suppress it. On a plateau only the first pixel survives.
pub fn non_max_suppress<T: ResponseValue>(resp: &Plane<T>, window: usize) -> Result<Vec<Peak>> {
    if window == 0 || window % 2 == 0 {
        return Err(Error::invalid(format!("NMS window must be odd, got {window}")));
    }
    let r = window / 2;
    let (w, h) = (resp.width(), resp.height());
    let mut peaks = Vec::new();
    for y in 0..h {
        let row = resp.row(y);
        for x in 0..w {
            let v = row[x];
            if !v.is_positive() {
                continue;
            }
            let mut is_max = true;
            'window: for yy in y.saturating_sub(r)..(y + r + 1).min(h) {
                let other = resp.row(yy);
                for (xx, &q) in other
                    .iter()
                    .enumerate()
                    .take((x + r + 1).min(w))
                    .skip(x.saturating_sub(r))
                {
                    if (yy, xx) == (y, x) {
                        continue;
                    }
                    let later = (yy, xx) > (y, x);
                    if q > v || (q == v && !later) {
                        is_max = false;
                        break 'window;
                    }
                }
            }
            if is_max {
                peaks.push((x, y));
            }
        }
    }
    Ok(peaks)
}

/// True if any of the 8 neighbours of `(x, y)` is positive.
pub fn has_positive_neighbour<T: ResponseValue>(resp: &Plane<T>, x: usize, y: usize) -> bool {
    let (w, h) = (resp.width(), resp.height());
    for yy in y.saturating_sub(1)..(y + 2).min(h) {
        for xx in x.saturating_sub(1)..(x + 2).min(w) {
            if (xx, yy) != (x, y) && resp.get(xx, yy).is_positive() {
                return true;
            }
        }
    }
    false
}

/// Drops candidates with no positive response among their 8 neighbours.
pub fn connectivity_filter<T: ResponseValue>(resp: &Plane<T>, candidates: &[Peak]) -> Vec<Peak> {
    candidates
        .iter()
        .copied()
        .filter(|&(x, y)| has_positive_neighbour(resp, x, y))
        .collect()
}

/// Drops candidates weaker than `proportion` × the strongest candidate in
/// the same `area`×`area` tile or any of the 8 tiles around it.
pub fn neighbourhood_compare<T: ResponseValue>(
    resp: &Plane<T>,
    candidates: &[Peak],
    area: usize,
    proportion: f64,
) -> Result<Vec<Peak>> {
    if area == 0 {
        return Err(Error::invalid("neighbourhood area must be positive"));
    }
    if !(proportion > 0.0 && proportion <= 1.0) {
        return Err(Error::invalid(format!(
            "proportion must lie in (0, 1], got {proportion}"
        )));
    }
    let tile = |(x, y): Peak| ((x / area) as i64, (y / area) as i64);
    let mut tile_max: HashMap<(i64, i64), f64> = HashMap::new();
    for &p in candidates {
        let s = resp.get(p.0, p.1).strength();
        let e = tile_max.entry(tile(p)).or_insert(f64::NEG_INFINITY);
        *e = e.max(s);
    }
    Ok(candidates
        .iter()
        .copied()
        .filter(|&p| {
            let (tx, ty) = tile(p);
            let mut best = f64::NEG_INFINITY;
            for dy in -1..=1 {
                for dx in -1..=1 {
                    if let Some(&m) = tile_max.get(&(tx + dx, ty + dy)) {
                        best = best.max(m);
                    }
                }
            }
            resp.get(p.0, p.1).strength() >= proportion * best
        })
        .collect())
}

/// Centre of mass of `max(value, 0)` over the 5×5 patch centred on `(x, y)`.
/// Returns `(x, y)` unchanged when the patch carries no positive mass.
pub fn subpixel_com<T: ResponseValue>(resp: &Plane<T>, x: usize, y: usize) -> Result<(f64, f64)> {
    if x < 2 || y < 2 || x + 2 >= resp.width() || y + 2 >= resp.height() {
        return Err(Error::OutOfBounds {
            x: x as i64,
            y: y as i64,
            margin: 2,
            width: resp.width(),
            height: resp.height(),
        });
    }
    let (mut mass, mut mx, mut my) = (0.0, 0.0, 0.0);
    for dy in -2i64..=2 {
        for dx in -2i64..=2 {
            let v = resp
                .get((x as i64 + dx) as usize, (y as i64 + dy) as usize)
                .strength()
                .max(0.0);
            mass += v;
            mx += v * dx as f64;
            my += v * dy as f64;
        }
    }
    if mass > 0.0 {
        Ok((x as f64 + mx / mass, y as f64 + my / mass))
    } else {
        Ok((x as f64, y as f64))
    }
}

/// The full selection pipeline. Output is sorted by descending strength,
/// ties by `(y, x)` of the integer peak.
pub fn select_features<T: ResponseValue>(resp: &Plane<T>, cfg: &SelectConfig) -> Result<Vec<Feature>> {
    cfg.validate()?;
    let mut peaks = non_max_suppress(resp, cfg.nms_window)?;
    if cfg.require_connectivity {
        peaks = connectivity_filter(resp, &peaks);
    }
    peaks = neighbourhood_compare(
        resp,
        &peaks,
        cfg.neighbourhood_area,
        cfg.neighbourhood_proportion,
    )?;
    let mut features: Vec<Feature> = peaks
        .into_iter()
        .map(|(px, py)| {
            let (x, y) = subpixel_com(resp, px, py).unwrap_or((px as f64, py as f64));
            Feature {
                x,
                y,
                peak: (px, py),
                strength: resp.get(px, py).strength(),
                orientation_bin: None,
            }
        })
        .collect();
    features.sort_by(|a, b| {
        b.strength
            .total_cmp(&a.strength)
            .then((a.peak.1, a.peak.0).cmp(&(b.peak.1, b.peak.0)))
    });
    Ok(features)
}

/// Integer position of the greatest response among positive pixels that
/// have at least one positive 8-neighbour. Ties go to the first pixel in
/// row-major order.
pub fn strongest_connected<T: ResponseValue>(resp: &Plane<T>) -> Option<Peak> {
    let mut best: Option<(Peak, T)> = None;
    for y in 0..resp.height() {
        for (x, &v) in resp.row(y).iter().enumerate() {
            if !v.is_positive() {
                continue;
            }
            if let Some((_, b)) = best {
                if !(v > b) {
                    continue;
                }
            }
            if has_positive_neighbour(resp, x, y) {
                best = Some(((x, y), v));
            }
        }
    }
    best.map(|(p, _)| p)
}
