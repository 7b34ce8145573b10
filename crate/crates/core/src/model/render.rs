//! Projection of the layout onto the tracked display object.
//!
//! Every overlay pixel inside an element's warped bounding box is filled when
//! its square overlaps the element: either one of the square's corners or its
//! centre maps back inside the element rect, or a warped element corner falls
//! in the square.

use super::{Element, ElementKind, SessionState};
use crate::edge::Homography;
use crate::gesture::Target;
use crate::tracking::DisplayObjectTrack;
use crate::vision::{ImageRgb8, Point2};

pub const SELECTION_COLOUR: [u8; 3] = [255, 255, 255];
const LABEL_COLOUR: [u8; 3] = [250, 240, 120];
const LOCKED_LABEL_COLOUR: [u8; 3] = [220, 40, 40];

pub fn kind_colour(kind: ElementKind) -> [u8; 3] {
    match kind {
        ElementKind::Input => [40, 120, 255],
        ElementKind::Output => [255, 160, 40],
    }
}

fn pixel_box(
    h: &Homography,
    e: &Element,
    width: usize,
    height: usize,
) -> Option<(usize, usize, usize, usize)> {
    let pts: Vec<Point2> = e
        .rect
        .corners()
        .iter()
        .filter_map(|&c| h.warp(c).ok())
        .collect();
    if pts.len() < 4 {
        return None;
    }
    let fold = |f: fn(f64, f64) -> f64, init: f64, sel: fn(&Point2) -> f64| {
        pts.iter().map(sel).fold(init, f)
    };
    let x0 = fold(f64::min, f64::INFINITY, |p| p.x).floor().max(0.0);
    let y0 = fold(f64::min, f64::INFINITY, |p| p.y).floor().max(0.0);
    let x1 = fold(f64::max, f64::NEG_INFINITY, |p| p.x)
        .ceil()
        .min(width as f64 - 1.0);
    let y1 = fold(f64::max, f64::NEG_INFINITY, |p| p.y)
        .ceil()
        .min(height as f64 - 1.0);
    (x0 <= x1 && y0 <= y1).then_some((x0 as usize, y0 as usize, x1 as usize, y1 as usize))
}

fn inside(h: &Homography, e: &Element, x: f64, y: f64) -> bool {
    h.inverse_warp(Point2::new(x, y))
        .is_ok_and(|m| e.rect.contains(m))
}

fn covered(h: &Homography, e: &Element, corners: &[Point2], x: f64, y: f64) -> bool {
    inside(h, e, x, y)
        || [(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)]
            .iter()
            .any(|(dx, dy)| inside(h, e, x + dx, y + dy))
        || corners
            .iter()
            .any(|c| (c.x - x).abs() <= 0.5 && (c.y - y).abs() <= 0.5)
}

/// Overlay of the layout for a `width`×`height` frame; black where nothing is drawn.
pub fn render_layout(
    s: &SessionState,
    dobj: &DisplayObjectTrack,
    width: usize,
    height: usize,
) -> ImageRgb8 {
    let mut out = ImageRgb8::new(width, height);
    let Some((_, h)) = dobj.pose() else {
        return out;
    };
    for e in &s.layout {
        let Some((x0, y0, x1, y1)) = pixel_box(h, e, width, height) else {
            continue;
        };
        let corners: Vec<Point2> = e
            .rect
            .corners()
            .iter()
            .filter_map(|&c| h.warp(c).ok())
            .collect();
        let selected = s.selection == Target::Element(e.id);
        let colour = kind_colour(e.kind);
        for y in y0..=y1 {
            for x in x0..=x1 {
                let (fx, fy) = (x as f64, y as f64);
                if !covered(h, e, &corners, fx, fy) {
                    continue;
                }
                let border = selected
                    && [(1.0, 0.0), (-1.0, 0.0), (0.0, 1.0), (0.0, -1.0)]
                        .iter()
                        .any(|(dx, dy)| !covered(h, e, &corners, fx + dx, fy + dy));
                out.put(x, y, if border { SELECTION_COLOUR } else { colour });
            }
        }
        if let Ok(c) = h.warp(e.rect.centre()) {
            let mark = if e.locked {
                LOCKED_LABEL_COLOUR
            } else {
                LABEL_COLOUR
            };
            let (cx, cy) = (c.x.round() as i64, c.y.round() as i64);
            for y in cy - 1..=cy + 1 {
                for x in cx - 1..=cx + 1 {
                    if x >= 0
                        && y >= 0
                        && (x as usize) < width
                        && (y as usize) < height
                        && inside(h, e, x as f64, y as f64)
                    {
                        out.put(x as usize, y as usize, mark);
                    }
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::edge::{warp_point, Quad};
    use crate::model::{Palette, Rect};

    fn p(x: f64, y: f64) -> Point2 {
        Point2::new(x, y)
    }

    fn element(id: u32, rect: Rect) -> Element {
        Element {
            id,
            kind: ElementKind::Input,
            rect,
            label: "b".into(),
            binding: None,
            locked: false,
        }
    }

    fn seg_dist(p: Point2, a: Point2, b: Point2) -> f64 {
        let (dx, dy) = (b.x - a.x, b.y - a.y);
        let t = (((p.x - a.x) * dx + (p.y - a.y) * dy) / (dx * dx + dy * dy)).clamp(0.0, 1.0);
        p.distance(Point2::new(a.x + t * dx, a.y + t * dy))
    }

    fn boundary_dist(q: &Quad, pt: Point2) -> f64 {
        let c = q.corners();
        (0..4)
            .map(|i| seg_dist(pt, c[i], c[(i + 1) % 4]))
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn empty_layout_or_no_pose_is_black() {
        let s = SessionState::new(Palette::standard());
        let q = Quad::new([p(10.0, 10.0), p(50.0, 10.0), p(50.0, 40.0), p(10.0, 40.0)]).unwrap();
        let img = render_layout(&s, &DisplayObjectTrack::with_pose(q).unwrap(), 64, 48);
        assert!(img.as_raw().iter().all(|&v| v == 0));
        let mut s = s;
        s.layout.push(element(
            1,
            Rect {
                x: 0.0,
                y: 0.0,
                w: 1.0,
                h: 1.0,
            },
        ));
        let img = render_layout(&s, &DisplayObjectTrack::default(), 64, 48);
        assert!(img.as_raw().iter().all(|&v| v == 0));
    }

    #[test]
    fn full_rect_fills_the_quad() {
        let q = Quad::new([
            p(30.3, 20.7),
            p(170.2, 35.1),
            p(150.8, 140.4),
            p(40.6, 120.9),
        ])
        .unwrap();
        let mut s = SessionState::new(Palette::standard());
        s.layout.push(element(
            1,
            Rect {
                x: 0.0,
                y: 0.0,
                w: 1.0,
                h: 1.0,
            },
        ));
        let img = render_layout(&s, &DisplayObjectTrack::with_pose(q).unwrap(), 200, 160);
        for y in 0..160 {
            for x in 0..200 {
                let pt = p(x as f64, y as f64);
                let filled = img.get(x, y) != [0, 0, 0];
                if boundary_dist(&q, pt) > 1.0 {
                    assert_eq!(filled, q.contains(pt), "pixel ({x},{y})");
                }
            }
        }
    }

    #[test]
    fn element_corners_follow_perspective() {
        let q = Quad::new([
            p(100.0, 80.0),
            p(520.0, 110.0),
            p(560.0, 420.0),
            p(60.0, 380.0),
        ])
        .unwrap();
        let dobj = DisplayObjectTrack::with_pose(q).unwrap();
        let rect = Rect {
            x: 0.2,
            y: 0.3,
            w: 0.35,
            h: 0.25,
        };
        let mut s = SessionState::new(Palette::standard());
        s.layout.push(element(7, rect));
        s.selection = Target::Element(7);
        let img = render_layout(&s, &dobj, 640, 480);
        let h = dobj.homography().unwrap();
        let warped = Quad::new(rect.corners().map(|c| warp_point(h, c).unwrap())).unwrap();
        let filled: Vec<Point2> = (0..480)
            .flat_map(|y| (0..640).map(move |x| (x, y)))
            .filter(|&(x, y)| img.get(x, y) != [0, 0, 0])
            .map(|(x, y)| p(x as f64, y as f64))
            .collect();
        for c in warped.corners() {
            assert_ne!(
                img.get(c.x.round() as usize, c.y.round() as usize),
                [0, 0, 0]
            );
            let nearest = filled
                .iter()
                .map(|f| f.distance(c))
                .fold(f64::INFINITY, f64::min);
            assert!(nearest <= 1.0, "corner {c:?} nearest pixel {nearest}");
        }
        for f in &filled {
            assert!(warped.contains(*f) || boundary_dist(&warped, *f) <= 1.0);
        }
        // Selection outline present, label dot present.
        assert!(filled
            .iter()
            .any(|f| img.get(f.x as usize, f.y as usize) == SELECTION_COLOUR));
        assert!(filled
            .iter()
            .any(|f| img.get(f.x as usize, f.y as usize) == LABEL_COLOUR));
    }
}
