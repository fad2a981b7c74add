use crate::{Error, Result};

/// Row-major 2D buffer.
///
/// `GrayImage` (8-bit intensities), `ResponseImage` (signed detector output)
/// and `BoolImage` (binary detector output) are all planes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Plane<T> {
    width: usize,
    height: usize,
    data: Vec<T>,
}

/// 8-bit grayscale image.
pub type GrayImage = Plane<u8>;

/// Per-pixel binary mask.
pub type BoolImage = Plane<bool>;

impl<T: Copy + Default> Plane<T> {
    /// A `width`×`height` plane filled with `T::default()`.
    pub fn new(width: usize, height: usize) -> Self {
        Self::filled(width, height, T::default())
    }
}

impl<T: Copy> Plane<T> {
    pub fn filled(width: usize, height: usize, value: T) -> Self {
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    /// Wraps a row-major buffer; fails if the length does not match or a
    /// dimension is zero.
    pub fn from_vec(width: usize, height: usize, data: Vec<T>) -> Result<Self> {
        if width == 0 || height == 0 {
            return Err(Error::invalid(format!(
                "plane dimensions must be positive, got {width}x{height}"
            )));
        }
        if data.len() != width * height {
            return Err(Error::invalid(format!(
                "buffer of {} elements does not match {width}x{height}",
                data.len()
            )));
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(width * height);
        for y in 0..height {
            for x in 0..width {
                data.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    #[inline]
    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn data(&self) -> &[T] {
        &self.data
    }

    #[inline]
    pub fn data_mut(&mut self) -> &mut [T] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<T> {
        self.data
    }

    #[inline]
    pub fn get(&self, x: usize, y: usize) -> T {
        self.data[y * self.width + x]
    }

    #[inline]
    pub fn set(&mut self, x: usize, y: usize, value: T) {
        self.data[y * self.width + x] = value;
    }

    #[inline]
    pub fn row(&self, y: usize) -> &[T] {
        &self.data[y * self.width..(y + 1) * self.width]
    }

    #[inline]
    pub fn row_mut(&mut self, y: usize) -> &mut [T] {
        &mut self.data[y * self.width..(y + 1) * self.width]
    }

    /// Checked access with signed coordinates.
    pub fn get_checked(&self, x: i64, y: i64) -> Option<T> {
        if x < 0 || y < 0 || x as usize >= self.width || y as usize >= self.height {
            None
        } else {
            Some(self.get(x as usize, y as usize))
        }
    }

    pub fn map<U: Copy>(&self, f: impl FnMut(T) -> U) -> Plane<U> {
        Plane {
            width: self.width,
            height: self.height,
            data: self.data.iter().copied().map(f).collect(),
        }
    }

    /// Mirror about the vertical axis (x ↦ width-1-x).
    pub fn flipped_horizontal(&self) -> Self {
        Self::from_fn(self.width, self.height, |x, y| {
            self.get(self.width - 1 - x, y)
        })
    }

    /// Mirror about the horizontal axis (y ↦ height-1-y).
    pub fn flipped_vertical(&self) -> Self {
        Self::from_fn(self.width, self.height, |x, y| {
            self.get(x, self.height - 1 - y)
        })
    }

    pub fn transposed(&self) -> Self {
        Self::from_fn(self.height, self.width, |x, y| self.get(y, x))
    }
}

impl BoolImage {
    pub fn count_true(&self) -> usize {
        self.data.iter().filter(|&&b| b).count()
    }

    /// Coordinates of all set pixels in row-major order.
    pub fn positions(&self) -> Vec<(usize, usize)> {
        self.data
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| (i % self.width, i / self.width))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_vec_rejects_bad_length() {
        assert!(Plane::from_vec(3, 2, vec![0u8; 5]).is_err());
        assert!(Plane::from_vec(0, 2, Vec::<u8>::new()).is_err());
        let p = Plane::from_vec(3, 2, vec![1u8, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!(p.get(2, 1), 6);
        assert_eq!(p.row(1), &[4, 5, 6]);
    }

    #[test]
    fn flips_and_transpose() {
        let p = Plane::from_vec(3, 2, vec![1u8, 2, 3, 4, 5, 6]).unwrap();
        assert_eq!(p.flipped_horizontal().data(), &[3, 2, 1, 6, 5, 4]);
        assert_eq!(p.flipped_vertical().data(), &[4, 5, 6, 1, 2, 3]);
        let t = p.transposed();
        assert_eq!((t.width(), t.height()), (2, 3));
        assert_eq!(t.data(), &[1, 4, 2, 5, 3, 6]);
    }

    #[test]
    fn checked_access() {
        let p = GrayImage::filled(4, 4, 7);
        assert_eq!(p.get_checked(3, 3), Some(7));
        assert_eq!(p.get_checked(-1, 0), None);
        assert_eq!(p.get_checked(0, 4), None);
    }
}
