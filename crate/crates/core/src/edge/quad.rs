//! Display-object quadrilateral from an edge map.
//!
//! The object boundary is the convex hull of all edge pixels. The hull
//! vertices spanning the largest-area quadrilateral locate the corners at any
//! in-plane rotation. Edge smoothing rounds each corner off by a pixel or two,
//! so every corner is then moved to the intersection of straight lines fitted
//! to the middle of its two sides. A corner whose fit fails stays at its hull
//! vertex.

use super::canny::EdgeMap;
use super::homography::Quad;
use crate::vision::{mask_hull, polygon_area, Point2};

/// Quads smaller than this (px²) are treated as noise.
pub const MIN_QUAD_AREA: f64 = 64.0;

/// Quads thinner than this (twice the area over the longer diagonal, px) are
/// slivers such as a rasterised straight edge.
pub const MIN_QUAD_THICKNESS: f64 = 4.0;

fn tri_area(a: Point2, b: Point2, c: Point2) -> f64 {
    ((b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x)).abs() / 2.0
}

/// Indices of the four vertices of a convex polygon that enclose the largest area.
///
/// For each diagonal `(i, k)` the best apex on either side is found with a
/// pointer that only moves forward, since triangle area over a convex chain
/// is unimodal. `O(n²)` overall. `poly` must be strictly convex with n ≥ 4.
pub fn max_area_quad(poly: &[Point2]) -> [usize; 4] {
    let n = poly.len();
    assert!(n >= 4, "need at least four vertices");
    let at = |i: usize| poly[i % n];
    let mut best = (f64::NEG_INFINITY, [0, 1, 2, 3]);
    for i in 0..n {
        let mut j = 1;
        let mut l = 3;
        for k in 2..n - 1 {
            if j >= k {
                j = k - 1;
            }
            while j + 1 < k
                && tri_area(at(i), at(i + j + 1), at(i + k))
                    >= tri_area(at(i), at(i + j), at(i + k))
            {
                j += 1;
            }
            if l <= k {
                l = k + 1;
            }
            while l + 1 < n
                && tri_area(at(i), at(i + k), at(i + l + 1))
                    >= tri_area(at(i), at(i + k), at(i + l))
            {
                l += 1;
            }
            let area =
                tri_area(at(i), at(i + j), at(i + k)) + tri_area(at(i), at(i + k), at(i + l));
            if area > best.0 {
                best = (area, [i, (i + j) % n, (i + k) % n, (i + l) % n]);
            }
        }
    }
    best.1
}

/// Orders four points TL, TR, BR, BL.
///
/// Sorts by angle about their centroid (clockwise on screen), then rotates so
/// the point with the smallest x + y (ties: smaller y) comes first.
pub fn order_corners(mut pts: [Point2; 4]) -> [Point2; 4] {
    let cx = pts.iter().map(|p| p.x).sum::<f64>() / 4.0;
    let cy = pts.iter().map(|p| p.y).sum::<f64>() / 4.0;
    pts.sort_by(|a, b| {
        (a.y - cy)
            .atan2(a.x - cx)
            .total_cmp(&(b.y - cy).atan2(b.x - cx))
    });
    let start = (0..4)
        .min_by(|&a, &b| {
            let (pa, pb) = (pts[a], pts[b]);
            (pa.x + pa.y)
                .total_cmp(&(pb.x + pb.y))
                .then(pa.y.total_cmp(&pb.y))
        })
        .unwrap_or(0);
    pts.rotate_left(start);
    pts
}

/// Edge pixels farther than this from a side (px) do not take part in its fit.
const SIDE_BAND: f64 = 2.5;
/// Fraction of each side, at either end, left out of the fit near the corners.
const CORNER_MARGIN: f64 = 0.12;
/// Refinement is abandoned if it would move a corner further than this (px).
const MAX_REFINE_SHIFT: f64 = 4.0;

/// Total-least-squares line through `pts`: (point on line, unit direction).
fn fit_line(pts: &[Point2]) -> Option<(Point2, Point2)> {
    if pts.len() < 4 {
        return None;
    }
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.x).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.y).sum::<f64>() / n;
    let (mut sxx, mut sxy, mut syy) = (0.0, 0.0, 0.0);
    for p in pts {
        let (dx, dy) = (p.x - mx, p.y - my);
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let theta = 0.5 * (2.0 * sxy).atan2(sxx - syy);
    Some((Point2::new(mx, my), Point2::new(theta.cos(), theta.sin())))
}

fn intersect(a: (Point2, Point2), b: (Point2, Point2)) -> Option<Point2> {
    let ((p, d), (q, e)) = (a, b);
    let den = d.x * e.y - d.y * e.x;
    if den.abs() < 1e-6 {
        return None;
    }
    let t = ((q.x - p.x) * e.y - (q.y - p.y) * e.x) / den;
    Some(Point2::new(p.x + t * d.x, p.y + t * d.y))
}

/// Intersection of lines fitted to the edge pixels along the two sides of each
/// corner. Corners whose fit fails keep their position.
fn fitted_corners(edges: &EdgeMap, corners: [Point2; 4]) -> [Point2; 4] {
    let mut sides: [Vec<Point2>; 4] = Default::default();
    let geom: Vec<_> = (0..4)
        .map(|i| {
            let (a, b) = (corners[i], corners[(i + 1) % 4]);
            let len = a.distance(b);
            (a, Point2::new((b.x - a.x) / len, (b.y - a.y) / len), len)
        })
        .collect();
    for (x, y) in edges.white_pixels() {
        let q = Point2::new(x as f64, y as f64);
        for (i, &(a, d, len)) in geom.iter().enumerate() {
            let (rx, ry) = (q.x - a.x, q.y - a.y);
            let t = rx * d.x + ry * d.y;
            let off = (rx * d.y - ry * d.x).abs();
            if off <= SIDE_BAND && t >= CORNER_MARGIN * len && t <= (1.0 - CORNER_MARGIN) * len {
                sides[i].push(q);
            }
        }
    }
    let lines: Vec<_> = sides.iter().map(|s| fit_line(s)).collect();
    let mut out = corners;
    for i in 0..4 {
        let (prev, next) = (lines[(i + 3) % 4], lines[i]);
        if let (Some(a), Some(b)) = (prev, next) {
            if let Some(p) = intersect(a, b) {
                if p.distance(corners[i]) <= MAX_REFINE_SHIFT {
                    out[i] = p;
                }
            }
        }
    }
    out
}

/// Finds the display-object quad, or `None` when the edge pixels do not span
/// a quadrilateral of at least [`MIN_QUAD_AREA`].
pub fn extract_quad(edges: &EdgeMap) -> Option<Quad> {
    let hull = mask_hull(edges);
    if hull.len() < 4 {
        return None;
    }
    let idx = max_area_quad(&hull);
    let corners = fitted_corners(edges, order_corners(idx.map(|i| hull[i])));
    let area = polygon_area(&corners);
    let diag = corners[0]
        .distance(corners[2])
        .max(corners[1].distance(corners[3]));
    if area < MIN_QUAD_AREA || 2.0 * area / diag < MIN_QUAD_THICKNESS {
        return None;
    }
    Quad::new(corners).ok()
}
