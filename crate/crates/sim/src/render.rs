//! Synthetic camera frames.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use vip_core::vision::{hsv_to_rgb_pixel, ImageRgb8, Point2};

use crate::error::SimError;
use crate::world::WorldState;

pub const BACKGROUND: [u8; 3] = [18, 20, 24];
/// Projection surface: near-white, slightly warm.
pub const SURFACE: [u8; 3] = [225, 225, 215];
pub const MARKER_RADIUS: f64 = 8.0;

/// Objects in view at one instant.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Scene {
    pub pose: Option<[Point2; 4]>,
    /// Centre and HSV colour.
    pub marker: Option<(Point2, [u8; 3])>,
}

fn inside_polygon(poly: &[Point2; 4], x: f64, y: f64) -> bool {
    let mut inside = false;
    for i in 0..4 {
        let (a, b) = (poly[i], poly[(i + 1) % 4]);
        if (a.y > y) != (b.y > y) && x < a.x + (y - a.y) * (b.x - a.x) / (b.y - a.y) {
            inside = !inside;
        }
    }
    inside
}

fn pixel_range(lo: f64, hi: f64, n: usize) -> std::ops::Range<usize> {
    let a = lo.floor().max(0.0) as usize;
    let b = (hi.ceil() + 1.0).clamp(0.0, n as f64) as usize;
    a.min(b)..b
}

/// Renders `scene`. A pixel belongs to a shape when its centre does; noise is
/// one Gaussian draw per pixel added to all three channels.
pub fn render_scene(
    scene: &Scene,
    width: usize,
    height: usize,
    luma_sigma: f64,
    noise_seed: u64,
) -> ImageRgb8 {
    let mut img = ImageRgb8::filled(width, height, BACKGROUND);
    if let Some(poly) = &scene.pose {
        let (xs, ys) = (poly.map(|p| p.x), poly.map(|p| p.y));
        let fold = |v: [f64; 4], f: fn(f64, f64) -> f64, init: f64| v.into_iter().fold(init, f);
        for y in pixel_range(
            fold(ys, f64::min, f64::INFINITY),
            fold(ys, f64::max, f64::NEG_INFINITY),
            height,
        ) {
            for x in pixel_range(
                fold(xs, f64::min, f64::INFINITY),
                fold(xs, f64::max, f64::NEG_INFINITY),
                width,
            ) {
                if inside_polygon(poly, x as f64, y as f64) {
                    img.put(x, y, SURFACE);
                }
            }
        }
    }
    if let Some((c, hsv)) = scene.marker {
        let rgb = hsv_to_rgb_pixel(hsv);
        let r = MARKER_RADIUS;
        for y in pixel_range(c.y - r, c.y + r, height) {
            for x in pixel_range(c.x - r, c.x + r, width) {
                let (dx, dy) = (x as f64 - c.x, y as f64 - c.y);
                if dx * dx + dy * dy <= r * r {
                    img.put(x, y, rgb);
                }
            }
        }
    }
    if luma_sigma > 0.0 {
        let normal = Normal::new(0.0, luma_sigma).expect("finite positive sigma");
        let mut rng = ChaCha8Rng::seed_from_u64(noise_seed);
        for px in img.as_raw_mut().chunks_exact_mut(3) {
            let n: f64 = normal.sample(&mut rng);
            for v in px {
                *v = (*v as f64 + n).round().clamp(0.0, 255.0) as u8;
            }
        }
    }
    img
}

/// Camera frame of `w` at `t`, with noise seeded by `w.seed ^ t`.
pub fn render_world(w: &WorldState, t: u64) -> Result<ImageRgb8, SimError> {
    if t >= w.duration_ms {
        return Err(SimError::TimeOutOfRange {
            t,
            duration: w.duration_ms,
        });
    }
    Ok(render_scene(
        &w.scene_at(t),
        w.width,
        w.height,
        w.noise.luma_sigma,
        w.seed ^ t,
    ))
}
