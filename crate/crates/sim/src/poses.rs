//! Random perspective poses of a rectangular surface seen by a pinhole camera.

use rand::Rng;
use vip_core::vision::Point2;

/// Focal length of the synthetic camera, px.
pub const FOCAL_PX: f64 = 700.0;
/// Aspect ratio (width / height) of the surface.
pub const ASPECT: f64 = 4.0 / 3.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoseSampler {
    pub width: usize,
    pub height: usize,
    /// Largest angle between surface normal and optical axis, degrees.
    pub max_tilt_deg: f64,
    /// Largest in-plane rotation, degrees.
    pub max_roll_deg: f64,
    /// Apparent surface width range, px, before tilt.
    pub size_px: (f64, f64),
    /// Keep every corner this far inside the frame.
    pub margin_px: f64,
}

impl PoseSampler {
    pub fn new(width: usize, height: usize, max_tilt_deg: f64) -> Self {
        Self {
            width,
            height,
            max_tilt_deg,
            max_roll_deg: 10.0,
            size_px: (260.0, 420.0),
            margin_px: 12.0,
        }
    }

    /// Image corners TL, TR, BR, BL of a random pose.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> [Point2; 4] {
        loop {
            let c = self.try_sample(rng);
            let m = self.margin_px;
            let fits = c.iter().all(|p| {
                p.x >= m
                    && p.y >= m
                    && p.x <= self.width as f64 - 1.0 - m
                    && p.y <= self.height as f64 - 1.0 - m
            });
            if fits {
                return c;
            }
        }
    }

    fn try_sample<R: Rng>(&self, rng: &mut R) -> [Point2; 4] {
        let tilt = rng.random_range(0.0..=self.max_tilt_deg).to_radians();
        let axis = rng.random_range(0.0..std::f64::consts::TAU);
        let roll = rng
            .random_range(-self.max_roll_deg..=self.max_roll_deg)
            .to_radians();
        let apparent = rng.random_range(self.size_px.0..=self.size_px.1);
        let (a, b) = (1.0, 1.0 / ASPECT);
        let z = FOCAL_PX * 2.0 * a / apparent;
        let (cx, cy) = (self.width as f64 / 2.0, self.height as f64 / 2.0);
        let ox = rng.random_range(-0.15..=0.15) * self.width as f64;
        let oy = rng.random_range(-0.15..=0.15) * self.height as f64;
        let centre = [ox * z / FOCAL_PX, oy * z / FOCAL_PX, z];
        let r = rotation(axis, tilt);
        [(-a, -b), (a, -b), (a, b), (-a, b)].map(|(x, y)| {
            let (x, y) = (
                x * roll.cos() - y * roll.sin(),
                x * roll.sin() + y * roll.cos(),
            );
            let p: [f64; 3] = std::array::from_fn(|i| r[i][0] * x + r[i][1] * y + centre[i]);
            Point2::new(cx + FOCAL_PX * p[0] / p[2], cy + FOCAL_PX * p[1] / p[2])
        })
    }
}

/// Rotation by `angle` about the in-image-plane axis at `axis_dir` radians.
fn rotation(axis_dir: f64, angle: f64) -> [[f64; 3]; 3] {
    let (ux, uy) = (axis_dir.cos(), axis_dir.sin());
    let (s, c) = angle.sin_cos();
    let t = 1.0 - c;
    [
        [c + ux * ux * t, ux * uy * t, uy * s],
        [ux * uy * t, c + uy * uy * t, -ux * s],
        [-uy * s, ux * s, c],
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use vip_core::edge::{order_corners, Quad};

    #[test]
    fn rotation_is_orthonormal_with_given_tilt() {
        let r = rotation(0.7, 0.4);
        for i in 0..3 {
            for j in 0..3 {
                let dot: f64 = (0..3).map(|k| r[k][i] * r[k][j]).sum();
                assert!((dot - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
        // Surface normal is the third column.
        assert!((r[2][2].acos() - 0.4).abs() < 1e-12);
    }

    #[test]
    fn untilted_pose_is_a_rectangle() {
        let mut s = PoseSampler::new(640, 480, 0.0);
        s.max_roll_deg = 0.0;
        let c = s.sample(&mut ChaCha8Rng::seed_from_u64(1));
        assert!((c[0].y - c[1].y).abs() < 1e-9 && (c[0].x - c[3].x).abs() < 1e-9);
        let (w, h) = (c[1].x - c[0].x, c[3].y - c[0].y);
        assert!((w / h - ASPECT).abs() < 1e-9);
    }

    #[test]
    fn poses_are_valid_ordered_and_inside() {
        let s = PoseSampler::new(640, 480, 30.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let c = s.sample(&mut rng);
            assert!(Quad::new(c).is_ok());
            assert_eq!(order_corners(c), c);
        }
    }
}
