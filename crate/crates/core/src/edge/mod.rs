//! Display-object detection: Canny edges, quadrilateral extraction and the
//! homography between the model surface and the camera image.

mod canny;
mod homography;
mod quad;

use thiserror::Error;

pub use canny::{canny, hysteresis, non_max_suppression, sobel, CannyParams, EdgeMap, Gradient};
pub use homography::{
    homography_from_quad, inverse_warp, warp_point, Homography, Quad, MIN_W, MODEL_CORNERS,
};
pub use quad::{extract_quad, max_area_quad, order_corners, MIN_QUAD_AREA, MIN_QUAD_THICKNESS};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GeometryError {
    #[error("quad is degenerate (three corners nearly collinear or non-positive area)")]
    DegenerateQuad,
    #[error("point maps to infinity under the homography")]
    AtInfinity,
    #[error("invalid edge parameters: {0}")]
    InvalidParams(&'static str),
}
