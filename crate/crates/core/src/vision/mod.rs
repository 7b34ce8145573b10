//! Raster types and the color-marker segmentation chain.
//!
//! A frame goes through [`gaussian_blur`], [`rgb_to_hsv`], [`segment`] and
//! [`pyramid_scrub`]; the resulting mask yields the marker [`centroid`] and
//! its [`convex_hull`].

mod blur;
mod calibrate;
mod color;
mod hull;
pub mod pnm;
mod raster;
mod scrub;
mod segment;

use thiserror::Error;

pub use blur::{gaussian_blur, gaussian_kernel};
pub use calibrate::suggest_thresholds;
pub use color::{achromatic_luma, hsv_to_rgb_pixel, rgb_to_gray, rgb_to_hsv, rgb_to_hsv_pixel};
pub use hull::{centroid, convex_hull, mask_hull, polygon_area};
pub use raster::{BinaryMask, ImageGray8, ImageHsv8, ImageRgb8, Interleaved, Point2};
pub use scrub::pyramid_scrub;
pub use segment::{segment, HsvThresholds};

#[derive(Debug, Error)]
pub enum ImageError {
    #[error("image dimensions must be non-zero, got {width}x{height}")]
    ZeroDimension { width: usize, height: usize },
    #[error("expected {expected} samples, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },
    #[error("mask sample {index} is {value}, expected 0 or 255")]
    NotBinary { index: usize, value: u8 },
    #[error("invalid thresholds: {0}")]
    InvalidThresholds(&'static str),
    #[error("netpbm: {0}")]
    Pnm(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
