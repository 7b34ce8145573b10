//! Blob centroid and convex hull extraction.

use super::raster::{BinaryMask, Point2};

/// Mean position of the white pixels, or `None` for an empty mask.
pub fn centroid(mask: &BinaryMask) -> Option<Point2> {
    let w = mask.width();
    let (mut sx, mut sy, mut n) = (0u64, 0u64, 0u64);
    for (y, row) in mask.as_raw().chunks_exact(w).enumerate() {
        let mut row_n = 0u64;
        for (x, &v) in row.iter().enumerate() {
            if v != 0 {
                sx += x as u64;
                row_n += 1;
            }
        }
        sy += y as u64 * row_n;
        n += row_n;
    }
    (n > 0).then(|| Point2::new(sx as f64 / n as f64, sy as f64 / n as f64))
}

fn cross(o: Point2, a: Point2, b: Point2) -> f64 {
    (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)
}

/// Convex hull by monotone chain.
///
/// Vertices come back counter-clockwise in the usual mathematical sense
/// (positive signed area with x right and y up, which appears clockwise on a
/// y-down screen), starting from the vertex with the lowest y and then lowest
/// x. Collinear boundary points are dropped. Fewer than three distinct inputs
/// are returned as-is (deduplicated, in the same start order).
pub fn convex_hull(points: &[Point2]) -> Vec<Point2> {
    let mut pts: Vec<Point2> = points.to_vec();
    pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
    pts.dedup();
    if pts.len() < 3 {
        return rotate_to_start(pts);
    }

    let mut hull: Vec<Point2> = Vec::with_capacity(pts.len() + 1);
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0
        {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    rotate_to_start(hull)
}

fn rotate_to_start(mut pts: Vec<Point2>) -> Vec<Point2> {
    if let Some(start) = pts
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.y.total_cmp(&b.y).then(a.x.total_cmp(&b.x)))
        .map(|(i, _)| i)
    {
        pts.rotate_left(start);
    }
    pts
}

/// Hull of the white pixels of a mask.
///
/// Only the leftmost and rightmost white pixel of each row can be hull
/// vertices, so those are the only candidates passed on.
pub fn mask_hull(mask: &BinaryMask) -> Vec<Point2> {
    let w = mask.width();
    let mut candidates = Vec::new();
    for (y, row) in mask.as_raw().chunks_exact(w).enumerate() {
        let first = row.iter().position(|&v| v != 0);
        let last = row.iter().rposition(|&v| v != 0);
        if let (Some(a), Some(b)) = (first, last) {
            candidates.push(Point2::new(a as f64, y as f64));
            if b != a {
                candidates.push(Point2::new(b as f64, y as f64));
            }
        }
    }
    convex_hull(&candidates)
}

/// Signed shoelace area; positive for the vertex order produced by [`convex_hull`].
pub fn polygon_area(poly: &[Point2]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let twice: f64 = (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            a.x * b.y - b.x * a.y
        })
        .sum();
    twice / 2.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    /// Brute-force oracle: a point is a hull vertex iff it lies in no closed
    /// triangle or segment spanned by the other points (Carathéodory in 2-D).
    fn brute_force_hull_vertices(points: &[Point2]) -> Vec<Point2> {
        let mut pts = points.to_vec();
        pts.sort_by(|a, b| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y)));
        pts.dedup();
        let n = pts.len();
        let mut out = Vec::new();
        'candidate: for i in 0..n {
            let others: Vec<Point2> = (0..n).filter(|&k| k != i).map(|k| pts[k]).collect();
            let q = pts[i];
            // Inside (or on) a triangle of others?
            for a in 0..others.len() {
                for b in a + 1..others.len() {
                    // On a segment of two others?
                    let (pa, pb) = (others[a], others[b]);
                    if cross(pa, pb, q) == 0.0
                        && q.x >= pa.x.min(pb.x)
                        && q.x <= pa.x.max(pb.x)
                        && q.y >= pa.y.min(pb.y)
                        && q.y <= pa.y.max(pb.y)
                    {
                        continue 'candidate;
                    }
                    for &pc in &others[b + 1..] {
                        let d1 = cross(pa, pb, q);
                        let d2 = cross(pb, pc, q);
                        let d3 = cross(pc, pa, q);
                        let has_neg = d1 < 0.0 || d2 < 0.0 || d3 < 0.0;
                        let has_pos = d1 > 0.0 || d2 > 0.0 || d3 > 0.0;
                        if !(has_neg && has_pos) && cross(pa, pb, pc) != 0.0 {
                            continue 'candidate;
                        }
                    }
                }
            }
            out.push(q);
        }
        out
    }

    #[test]
    fn centroid_examples() {
        let mut m = BinaryMask::new(10, 10);
        assert_eq!(centroid(&m), None);
        m.set(5, 7, true);
        assert_eq!(centroid(&m), Some(p(5.0, 7.0)));

        let mut disk = BinaryMask::new(100, 120);
        for y in 0..120 {
            for x in 0..100 {
                let (dx, dy) = (x as f64 - 50.0, y as f64 - 60.0);
                if dx * dx + dy * dy <= 15.0 * 15.0 {
                    disk.set(x, y, true);
                }
            }
        }
        let c = centroid(&disk).unwrap();
        assert!((c.x - 50.0).abs() <= 0.5 && (c.y - 60.0).abs() <= 0.5);
    }

    #[test]
    fn hull_of_triangle_is_itself() {
        let pts = [p(0.0, 0.0), p(4.0, 1.0), p(1.0, 5.0)];
        let hull = convex_hull(&pts);
        assert_eq!(hull.len(), 3);
        for q in pts {
            assert!(hull.contains(&q));
        }
        assert!(polygon_area(&hull) > 0.0);
    }

    #[test]
    fn hull_drops_interior_points() {
        let mut pts = vec![p(0.0, 0.0), p(10.0, 0.0), p(10.0, 10.0), p(0.0, 10.0)];
        for i in 1..=10 {
            pts.push(p(i as f64 * 0.8, 9.0 - i as f64 * 0.7));
        }
        let hull = convex_hull(&pts);
        assert_eq!(
            hull,
            vec![p(0.0, 0.0), p(10.0, 0.0), p(10.0, 10.0), p(0.0, 10.0)]
        );
    }

    #[test]
    fn collinear_points_reduce_to_endpoints() {
        let pts: Vec<Point2> = (0..5).map(|i| p(i as f64 * 2.0, 1.0 + i as f64)).collect();
        let hull = convex_hull(&pts);
        assert_eq!(hull.len(), 2);
        assert!(hull.contains(&p(0.0, 1.0)) && hull.contains(&p(8.0, 5.0)));
        assert_eq!(brute_force_hull_vertices(&pts).len(), 2);
    }

    #[test]
    fn degenerate_inputs_are_returned() {
        assert!(convex_hull(&[]).is_empty());
        assert_eq!(convex_hull(&[p(1.0, 1.0), p(1.0, 1.0)]), vec![p(1.0, 1.0)]);
        assert_eq!(
            convex_hull(&[p(3.0, 1.0), p(1.0, 2.0)]),
            vec![p(3.0, 1.0), p(1.0, 2.0)]
        );
    }

    #[test]
    fn hull_starts_at_lowest_y_then_x() {
        let pts = [p(5.0, 5.0), p(2.0, 0.0), p(0.0, 0.0), p(0.0, 6.0)];
        assert_eq!(convex_hull(&pts)[0], p(0.0, 0.0));
    }

    #[test]
    fn mask_hull_matches_full_pixel_hull() {
        let mut m = BinaryMask::new(30, 30);
        for y in 5..25 {
            for x in (y / 2)..(30 - y / 3) {
                m.set(x, y, true);
            }
        }
        let all: Vec<Point2> = m
            .white_pixels()
            .map(|(x, y)| p(x as f64, y as f64))
            .collect();
        assert_eq!(mask_hull(&m), convex_hull(&all));
    }

    proptest! {
        #[test]
        fn matches_brute_force(raw in proptest::collection::vec((0i32..8, 0i32..8), 1..=12)) {
            let pts: Vec<Point2> = raw.iter().map(|&(x, y)| p(x as f64, y as f64)).collect();
            let hull = convex_hull(&pts);
            let mut expected = brute_force_hull_vertices(&pts);
            let mut got = hull.clone();
            let key = |a: &Point2, b: &Point2| a.x.total_cmp(&b.x).then(a.y.total_cmp(&b.y));
            expected.sort_by(key);
            got.sort_by(key);
            prop_assert_eq!(got, expected);
            if hull.len() >= 3 {
                prop_assert!(polygon_area(&hull) > 0.0);
            }
        }

        #[test]
        fn centroid_inside_bounding_box(raw in proptest::collection::vec((0usize..16, 0usize..16), 1..40)) {
            let mut m = BinaryMask::new(16, 16);
            for &(x, y) in &raw {
                m.set(x, y, true);
            }
            let c = centroid(&m).unwrap();
            let xs = raw.iter().map(|r| r.0);
            let ys = raw.iter().map(|r| r.1);
            prop_assert!(c.x >= xs.clone().min().unwrap() as f64 && c.x <= xs.max().unwrap() as f64);
            prop_assert!(c.y >= ys.clone().min().unwrap() as f64 && c.y <= ys.max().unwrap() as f64);
        }
    }
}
