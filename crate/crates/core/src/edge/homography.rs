//! Display-object pose: the quadrilateral and its projective map from the
//! model unit square.

use nalgebra::{SMatrix, SVector};
use serde::{Deserialize, Serialize};

use super::GeometryError;
use crate::vision::{polygon_area, Point2};

/// Below this |w| a projected point is treated as being at infinity.
pub const MIN_W: f64 = 1e-9;

/// Four corners ordered TL, TR, BR, BL, clockwise on screen (y down).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[Point2; 4]", into = "[Point2; 4]")]
pub struct Quad {
    corners: [Point2; 4],
}

impl Quad {
    pub fn new(corners: [Point2; 4]) -> Result<Self, GeometryError> {
        if corners.iter().any(|c| !c.is_finite()) {
            return Err(GeometryError::DegenerateQuad);
        }
        if polygon_area(&corners) <= 0.0 {
            return Err(GeometryError::DegenerateQuad);
        }
        Ok(Self { corners })
    }

    pub fn corners(&self) -> [Point2; 4] {
        self.corners
    }

    pub fn top_left(&self) -> Point2 {
        self.corners[0]
    }

    pub fn area(&self) -> f64 {
        polygon_area(&self.corners)
    }

    /// Mean length of the top and bottom edges.
    pub fn width(&self) -> f64 {
        let [tl, tr, br, bl] = self.corners;
        (tl.distance(tr) + bl.distance(br)) / 2.0
    }

    /// True when `p` lies inside or on the boundary of the (convex) quad.
    pub fn contains(&self, p: Point2) -> bool {
        (0..4).all(|i| {
            let (a, b) = (self.corners[i], self.corners[(i + 1) % 4]);
            (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x) >= 0.0
        })
    }

    /// Largest per-axis corner displacement between two quads.
    pub fn max_corner_shift(&self, other: &Quad) -> f64 {
        self.corners
            .iter()
            .zip(other.corners.iter())
            .map(|(a, b)| (a.x - b.x).abs().max((a.y - b.y).abs()))
            .fold(0.0, f64::max)
    }
}

impl TryFrom<[Point2; 4]> for Quad {
    type Error = GeometryError;

    fn try_from(corners: [Point2; 4]) -> Result<Self, Self::Error> {
        Quad::new(corners)
    }
}

impl From<Quad> for [Point2; 4] {
    fn from(q: Quad) -> Self {
        q.corners
    }
}

/// Unit-square model corners in TL, TR, BR, BL order.
pub const MODEL_CORNERS: [Point2; 4] = [
    Point2::new(0.0, 0.0),
    Point2::new(1.0, 0.0),
    Point2::new(1.0, 1.0),
    Point2::new(0.0, 1.0),
];

/// 3×3 projective map with `m[2][2] == 1`.
///
/// Serialized as nine row-major numbers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 9]", into = "[f64; 9]")]
pub struct Homography {
    m: [[f64; 3]; 3],
}

impl From<[f64; 9]> for Homography {
    fn from(v: [f64; 9]) -> Self {
        Self {
            m: [[v[0], v[1], v[2]], [v[3], v[4], v[5]], [v[6], v[7], v[8]]],
        }
    }
}

impl From<Homography> for [f64; 9] {
    fn from(h: Homography) -> Self {
        let m = h.m;
        [
            m[0][0], m[0][1], m[0][2], m[1][0], m[1][1], m[1][2], m[2][0], m[2][1], m[2][2],
        ]
    }
}

fn apply(m: &[[f64; 3]; 3], p: Point2) -> Result<Point2, GeometryError> {
    let w = m[2][0] * p.x + m[2][1] * p.y + m[2][2];
    if w.abs() <= MIN_W {
        return Err(GeometryError::AtInfinity);
    }
    let x = m[0][0] * p.x + m[0][1] * p.y + m[0][2];
    let y = m[1][0] * p.x + m[1][1] * p.y + m[1][2];
    Ok(Point2::new(x / w, y / w))
}

fn det3(m: &[[f64; 3]; 3]) -> f64 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn adjugate(m: &[[f64; 3]; 3]) -> [[f64; 3]; 3] {
    [
        [
            m[1][1] * m[2][2] - m[1][2] * m[2][1],
            m[0][2] * m[2][1] - m[0][1] * m[2][2],
            m[0][1] * m[1][2] - m[0][2] * m[1][1],
        ],
        [
            m[1][2] * m[2][0] - m[1][0] * m[2][2],
            m[0][0] * m[2][2] - m[0][2] * m[2][0],
            m[0][2] * m[1][0] - m[0][0] * m[1][2],
        ],
        [
            m[1][0] * m[2][1] - m[1][1] * m[2][0],
            m[0][1] * m[2][0] - m[0][0] * m[2][1],
            m[0][0] * m[1][1] - m[0][1] * m[1][0],
        ],
    ]
}

impl Homography {
    pub const IDENTITY: Homography = Homography {
        m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
    };

    /// Builds from a raw matrix, normalising so `m[2][2] == 1`.
    pub fn from_matrix(m: [[f64; 3]; 3]) -> Result<Self, GeometryError> {
        let s = m[2][2];
        if s.abs() <= f64::EPSILON || !s.is_finite() {
            return Err(GeometryError::DegenerateQuad);
        }
        let mut n = m;
        n.iter_mut().flatten().for_each(|v| *v /= s);
        if det3(&n).abs() <= f64::EPSILON || n.iter().flatten().any(|v| !v.is_finite()) {
            return Err(GeometryError::DegenerateQuad);
        }
        Ok(Self { m: n })
    }

    pub fn matrix(&self) -> [[f64; 3]; 3] {
        self.m
    }

    /// Model → image.
    pub fn warp(&self, p: Point2) -> Result<Point2, GeometryError> {
        apply(&self.m, p)
    }

    /// Image → model, through the adjugate (a scaled inverse).
    pub fn inverse_warp(&self, p: Point2) -> Result<Point2, GeometryError> {
        let adj = adjugate(&self.m);
        let det = det3(&self.m);
        // Keep the homogeneous scale comparable to the forward map so the
        // at-infinity test means the same thing in both directions.
        let mut inv = adj;
        inv.iter_mut().flatten().for_each(|v| *v /= det);
        apply(&inv, p)
    }
}

pub fn warp_point(h: &Homography, p: Point2) -> Result<Point2, GeometryError> {
    h.warp(p)
}

pub fn inverse_warp(h: &Homography, p: Point2) -> Result<Point2, GeometryError> {
    h.inverse_warp(p)
}

/// Relative tolerance on corner-triple areas below which a quad counts as degenerate.
const COLLINEAR_TOL: f64 = 1e-9;

/// Exact 4-point map from the model unit square onto `q`.
///
/// Solves the 8×8 direct linear system with `m[2][2]` fixed at 1. Fails when
/// any three corners are (nearly) collinear.
pub fn homography_from_quad(q: &Quad) -> Result<Homography, GeometryError> {
    let c = q.corners();
    let scale = c
        .iter()
        .flat_map(|a| c.iter().map(move |b| a.distance(*b)))
        .fold(0.0, f64::max);
    for skip in 0..4 {
        let t: Vec<Point2> = (0..4).filter(|&i| i != skip).map(|i| c[i]).collect();
        let twice = (t[1].x - t[0].x) * (t[2].y - t[0].y) - (t[1].y - t[0].y) * (t[2].x - t[0].x);
        if twice.abs() <= COLLINEAR_TOL * scale * scale {
            return Err(GeometryError::DegenerateQuad);
        }
    }

    let mut a = SMatrix::<f64, 8, 8>::zeros();
    let mut b = SVector::<f64, 8>::zeros();
    for (i, (m, p)) in MODEL_CORNERS.iter().zip(c.iter()).enumerate() {
        let (u, v, x, y) = (m.x, m.y, p.x, p.y);
        let r = 2 * i;
        a[(r, 0)] = u;
        a[(r, 1)] = v;
        a[(r, 2)] = 1.0;
        a[(r, 6)] = -u * x;
        a[(r, 7)] = -v * x;
        b[r] = x;
        a[(r + 1, 3)] = u;
        a[(r + 1, 4)] = v;
        a[(r + 1, 5)] = 1.0;
        a[(r + 1, 6)] = -u * y;
        a[(r + 1, 7)] = -v * y;
        b[r + 1] = y;
    }
    let h = a.lu().solve(&b).ok_or(GeometryError::DegenerateQuad)?;
    Homography::from_matrix([[h[0], h[1], h[2]], [h[3], h[4], h[5]], [h[6], h[7], 1.0]])
}
