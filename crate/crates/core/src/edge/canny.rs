//! Canny edge detection: Gaussian pre-blur, Sobel gradients, 4-direction
//! non-maximum suppression and 8-connected hysteresis.

use serde::{Deserialize, Serialize};

use super::GeometryError;
use crate::vision::{gaussian_blur, BinaryMask, ImageGray8};

/// Edge pixels are 255, everything else 0.
pub type EdgeMap = BinaryMask;

/// tan(22.5°), boundary between axis-aligned and diagonal direction bins.
const TAN_22_5: f32 = 0.414_213_57;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CannyParams {
    /// Weak threshold in Sobel magnitude units.
    pub low_thresh: f32,
    /// Strong threshold in Sobel magnitude units.
    pub high_thresh: f32,
    /// Pre-blur standard deviation in pixels; 0 disables the blur.
    pub sigma: f64,
}

impl CannyParams {
    pub fn new(low_thresh: f32, high_thresh: f32, sigma: f64) -> Result<Self, GeometryError> {
        let p = Self {
            low_thresh,
            high_thresh,
            sigma,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<(), GeometryError> {
        let ok = self.low_thresh >= 0.0
            && self.low_thresh <= self.high_thresh
            && self.high_thresh.is_finite()
            && self.sigma >= 0.0
            && self.sigma.is_finite();
        if ok {
            Ok(())
        } else {
            Err(GeometryError::InvalidParams(
                "need 0 <= low_thresh <= high_thresh and a finite sigma >= 0",
            ))
        }
    }
}

impl Default for CannyParams {
    fn default() -> Self {
        Self {
            low_thresh: 100.0,
            high_thresh: 250.0,
            sigma: 1.0,
        }
    }
}

/// Sobel gradient field.
#[derive(Debug, Clone)]
pub struct Gradient {
    pub width: usize,
    pub height: usize,
    pub gx: Vec<f32>,
    pub gy: Vec<f32>,
    pub mag: Vec<f32>,
}

/// 3×3 Sobel with clamp-to-border sampling.
pub fn sobel(img: &ImageGray8) -> Gradient {
    let (w, h) = (img.width(), img.height());
    let n = w * h;
    let (mut gx, mut gy, mut mag) = (vec![0f32; n], vec![0f32; n], vec![0f32; n]);
    let px = img.as_raw();
    for y in 0..h {
        let up = &px[y.saturating_sub(1) * w..][..w];
        let mid = &px[y * w..][..w];
        let down = &px[(y + 1).min(h - 1) * w..][..w];
        for x in 0..w {
            let l = x.saturating_sub(1);
            let r = (x + 1).min(w - 1);
            let (a, b, c) = (up[l] as i32, up[x] as i32, up[r] as i32);
            let (d, f) = (mid[l] as i32, mid[r] as i32);
            let (g, hh, k) = (down[l] as i32, down[x] as i32, down[r] as i32);
            let sx = (c + 2 * f + k) - (a + 2 * d + g);
            let sy = (g + 2 * hh + k) - (a + 2 * b + c);
            let i = y * w + x;
            gx[i] = sx as f32;
            gy[i] = sy as f32;
            mag[i] = ((sx * sx + sy * sy) as f32).sqrt();
        }
    }
    Gradient {
        width: w,
        height: h,
        gx,
        gy,
        mag,
    }
}

/// Thins gradient ridges to one pixel.
///
/// Each pixel is compared with its two neighbours along the quantised
/// gradient direction; it survives when it is `>=` the neighbour on the
/// negative side and `>` the one on the positive side, so a plateau of two
/// equal pixels keeps exactly one. The outermost one-pixel frame is zeroed.
pub fn non_max_suppression(grad: &Gradient) -> Vec<f32> {
    suppress_above(grad, 0.0)
}

/// [`non_max_suppression`] that also drops every pixel with magnitude at or
/// below `floor`.
fn suppress_above(grad: &Gradient, floor: f32) -> Vec<f32> {
    let (w, h) = (grad.width, grad.height);
    let mut out = vec![0f32; w * h];
    if w < 3 || h < 3 {
        return out;
    }
    let m = &grad.mag;
    for y in 1..h - 1 {
        for x in 1..w - 1 {
            let i = y * w + x;
            let mag = m[i];
            if mag <= floor {
                continue;
            }
            let (ax, ay) = (grad.gx[i].abs(), grad.gy[i].abs());
            // (negative-side neighbour, positive-side neighbour)
            let (before, after) = if ay <= ax * TAN_22_5 {
                (m[i - 1], m[i + 1])
            } else if ax <= ay * TAN_22_5 {
                (m[i - w], m[i + w])
            } else if (grad.gx[i] > 0.0) == (grad.gy[i] > 0.0) {
                // Gradient along the main diagonal (down-right on screen).
                (m[i - w - 1], m[i + w + 1])
            } else {
                (m[i + w - 1], m[i - w + 1])
            };
            if mag >= before && mag > after {
                out[i] = mag;
            }
        }
    }
    out
}

/// Double-threshold hysteresis.
///
/// Pixels above `high` are edges; pixels in `(low, high]` become edges when
/// 8-connected, directly or through other such pixels, to an edge.
pub fn hysteresis(mag: &[f32], width: usize, height: usize, low: f32, high: f32) -> EdgeMap {
    assert_eq!(mag.len(), width * height);
    let mut edges = EdgeMap::new(width, height);
    let out = edges.as_raw_mut();
    let mut stack: Vec<usize> = mag
        .iter()
        .enumerate()
        .filter(|(_, &m)| m > high)
        .map(|(i, _)| i)
        .collect();
    for &i in &stack {
        out[i] = BinaryMask::ON;
    }
    while let Some(i) = stack.pop() {
        let (x, y) = ((i % width) as isize, (i / width) as isize);
        for dy in -1..=1isize {
            for dx in -1..=1isize {
                let (nx, ny) = (x + dx, y + dy);
                if nx < 0 || ny < 0 || nx >= width as isize || ny >= height as isize {
                    continue;
                }
                let j = ny as usize * width + nx as usize;
                if out[j] == 0 && mag[j] > low {
                    out[j] = BinaryMask::ON;
                    stack.push(j);
                }
            }
        }
    }
    edges
}

pub fn canny(img: &ImageGray8, p: &CannyParams) -> EdgeMap {
    let blurred;
    let src = if p.sigma > 0.0 {
        blurred = gaussian_blur(img, p.sigma);
        &blurred
    } else {
        img
    };
    let grad = sobel(src);
    // Hysteresis ignores anything at or below the weak threshold.
    let thin = suppress_above(&grad, p.low_thresh);
    hysteresis(
        &thin,
        img.width(),
        img.height(),
        p.low_thresh,
        p.high_thresh,
    )
}
