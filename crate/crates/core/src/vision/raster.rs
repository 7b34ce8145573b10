//! Row-major 8-bit rasters.
//!
//! Every raster is at least 1×1. Pixel `(x, y)` lives at index `y * width + x`
//! (times the channel count for the interleaved types).

use serde::{Deserialize, Serialize};

use super::ImageError;

/// A sub-pixel position in the image frame: origin top-left, x right, y down.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl From<[f64; 2]> for Point2 {
    fn from([x, y]: [f64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<Point2> for [f64; 2] {
    fn from(p: Point2) -> Self {
        [p.x, p.y]
    }
}

/// Interleaved 8-bit raster with a fixed channel count.
///
/// Implemented by every image type so filters can be written once.
pub trait Interleaved: Sized {
    const CHANNELS: usize;

    fn width(&self) -> usize;
    fn height(&self) -> usize;
    fn samples(&self) -> &[u8];

    /// Rebuilds a raster of the same type from raw samples.
    fn from_samples(width: usize, height: usize, samples: Vec<u8>) -> Result<Self, ImageError>;
}

fn check_dims(width: usize, height: usize, channels: usize, len: usize) -> Result<(), ImageError> {
    if width == 0 || height == 0 {
        return Err(ImageError::ZeroDimension { width, height });
    }
    let expected = width * height * channels;
    if len != expected {
        return Err(ImageError::LengthMismatch {
            expected,
            actual: len,
        });
    }
    Ok(())
}

macro_rules! raster_common {
    ($name:ident, $channels:expr) => {
        impl $name {
            /// Creates an all-zero raster.
            ///
            /// # Panics
            ///
            /// Panics if either dimension is zero.
            pub fn new(width: usize, height: usize) -> Self {
                assert!(
                    width > 0 && height > 0,
                    "raster dimensions must be non-zero"
                );
                Self {
                    width,
                    height,
                    data: vec![0; width * height * $channels],
                }
            }

            pub fn from_raw(
                width: usize,
                height: usize,
                data: Vec<u8>,
            ) -> Result<Self, ImageError> {
                <Self as Interleaved>::from_samples(width, height, data)
            }

            pub fn width(&self) -> usize {
                self.width
            }

            pub fn height(&self) -> usize {
                self.height
            }

            pub fn as_raw(&self) -> &[u8] {
                &self.data
            }

            pub fn into_raw(self) -> Vec<u8> {
                self.data
            }

            /// Row `y` as a slice of interleaved samples.
            pub fn row(&self, y: usize) -> &[u8] {
                let stride = self.width * $channels;
                &self.data[y * stride..(y + 1) * stride]
            }
        }

        impl Interleaved for $name {
            const CHANNELS: usize = $channels;

            fn width(&self) -> usize {
                self.width
            }

            fn height(&self) -> usize {
                self.height
            }

            fn samples(&self) -> &[u8] {
                &self.data
            }

            fn from_samples(
                width: usize,
                height: usize,
                samples: Vec<u8>,
            ) -> Result<Self, ImageError> {
                check_dims(width, height, $channels, samples.len())?;
                Self::validate(&samples)?;
                Ok(Self {
                    width,
                    height,
                    data: samples,
                })
            }
        }
    };
}

/// RGB camera frame, `(r, g, b)` triples.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageRgb8 {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

raster_common!(ImageRgb8, 3);

impl ImageRgb8 {
    fn validate(_: &[u8]) -> Result<(), ImageError> {
        Ok(())
    }

    pub fn filled(width: usize, height: usize, rgb: [u8; 3]) -> Self {
        let mut img = Self::new(width, height);
        for px in img.data.chunks_exact_mut(3) {
            px.copy_from_slice(&rgb);
        }
        img
    }

    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub fn put(&mut self, x: usize, y: usize, rgb: [u8; 3]) {
        let i = (y * self.width + x) * 3;
        self.data[i..i + 3].copy_from_slice(&rgb);
    }

    pub fn as_raw_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }
}

/// HSV raster: hue 0–255 spans the full circle, saturation and value 0–255.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageHsv8 {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

raster_common!(ImageHsv8, 3);

impl ImageHsv8 {
    fn validate(_: &[u8]) -> Result<(), ImageError> {
        Ok(())
    }

    pub fn filled(width: usize, height: usize, hsv: [u8; 3]) -> Self {
        let mut img = Self::new(width, height);
        for px in img.data.chunks_exact_mut(3) {
            px.copy_from_slice(&hsv);
        }
        img
    }

    pub fn get(&self, x: usize, y: usize) -> [u8; 3] {
        let i = (y * self.width + x) * 3;
        [self.data[i], self.data[i + 1], self.data[i + 2]]
    }

    pub fn put(&mut self, x: usize, y: usize, hsv: [u8; 3]) {
        let i = (y * self.width + x) * 3;
        self.data[i..i + 3].copy_from_slice(&hsv);
    }

    pub(crate) fn as_raw_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }
}

/// Single-channel luminance raster.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageGray8 {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

raster_common!(ImageGray8, 1);

impl ImageGray8 {
    fn validate(_: &[u8]) -> Result<(), ImageError> {
        Ok(())
    }

    pub fn filled(width: usize, height: usize, value: u8) -> Self {
        Self {
            width,
            height,
            data: vec![value; width * height],
        }
    }

    pub fn get(&self, x: usize, y: usize) -> u8 {
        self.data[y * self.width + x]
    }

    pub fn put(&mut self, x: usize, y: usize, value: u8) {
        self.data[y * self.width + x] = value;
    }

    pub fn as_raw_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }
}

/// Black and white image whose samples are exactly 0 or 255.
///
/// Also used for edge maps, which share the same contract.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    data: Vec<u8>,
}

raster_common!(BinaryMask, 1);

impl BinaryMask {
    pub const ON: u8 = 255;

    fn validate(samples: &[u8]) -> Result<(), ImageError> {
        match samples.iter().position(|&v| v != 0 && v != Self::ON) {
            Some(index) => Err(ImageError::NotBinary {
                index,
                value: samples[index],
            }),
            None => Ok(()),
        }
    }

    pub fn is_set(&self, x: usize, y: usize) -> bool {
        self.data[y * self.width + x] != 0
    }

    pub fn set(&mut self, x: usize, y: usize, on: bool) {
        self.data[y * self.width + x] = if on { Self::ON } else { 0 };
    }

    pub fn count(&self) -> usize {
        self.data.iter().filter(|&&v| v != 0).count()
    }

    pub fn is_empty(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Coordinates of white pixels in row-major order.
    pub fn white_pixels(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.width;
        self.data
            .iter()
            .enumerate()
            .filter(|(_, &v)| v != 0)
            .map(move |(i, _)| (i % w, i / w))
    }

    /// Mutable access for kernels in this crate; callers keep the {0, 255} contract.
    pub(crate) fn as_raw_mut(&mut self) -> &mut [u8] {
        &mut self.data
    }
}

impl From<BinaryMask> for ImageGray8 {
    fn from(mask: BinaryMask) -> Self {
        ImageGray8 {
            width: mask.width,
            height: mask.height,
            data: mask.data,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_dimensions() {
        assert!(matches!(
            ImageRgb8::from_raw(0, 4, vec![]),
            Err(ImageError::ZeroDimension { .. })
        ));
        assert!(matches!(
            ImageGray8::from_raw(2, 2, vec![0; 5]),
            Err(ImageError::LengthMismatch {
                expected: 4,
                actual: 5
            })
        ));
    }

    #[test]
    fn mask_rejects_grey_values() {
        let err = BinaryMask::from_raw(2, 1, vec![255, 7]).unwrap_err();
        assert!(matches!(err, ImageError::NotBinary { index: 1, value: 7 }));
        assert!(BinaryMask::from_raw(2, 1, vec![255, 0]).is_ok());
    }

    #[test]
    fn white_pixels_are_row_major() {
        let mut m = BinaryMask::new(4, 3);
        m.set(3, 0, true);
        m.set(1, 2, true);
        assert_eq!(m.white_pixels().collect::<Vec<_>>(), vec![(3, 0), (1, 2)]);
        assert_eq!(m.count(), 2);
    }

    #[test]
    fn point_serializes_as_pair() {
        let p = Point2::new(1.5, -2.0);
        assert_eq!(serde_json::to_string(&p).unwrap(), "[1.5,-2.0]");
        let q: Point2 = serde_json::from_str("[3,4]").unwrap();
        assert_eq!(q, Point2::new(3.0, 4.0));
    }
}
