use vip_core::pipeline::{Pipeline, PipelineConfig};
use vip_core::tracking::MARKER_LOST_FRAMES;
use vip_core::vision::{hsv_to_rgb_pixel, ImageRgb8, Point2};

const SURFACE: [u8; 3] = [225, 225, 215];
const BACKGROUND: [u8; 3] = [18, 20, 24];

/// Light axis-aligned surface on a dark desk, with an optional green disk.
fn frame(marker: Option<Point2>) -> ImageRgb8 {
    let mut img = ImageRgb8::new(320, 240);
    let green = hsv_to_rgb_pixel([85, 220, 230]);
    for y in 0..240 {
        for x in 0..320 {
            let on_surface = (60..=280).contains(&x) && (40..=200).contains(&y);
            let in_disk =
                marker.is_some_and(|c| Point2::new(x as f64, y as f64).distance(c) <= 6.0);
            img.put(
                x,
                y,
                if in_disk {
                    green
                } else if on_surface {
                    SURFACE
                } else {
                    BACKGROUND
                },
            );
        }
    }
    img
}

#[test]
fn surface_and_marker_are_found() {
    let mut p = Pipeline::new(PipelineConfig::default());
    let at = Point2::new(150.0, 110.0);
    let out = p.process(&frame(Some(at)), 0);
    let ev = out.move_event.expect("first sighting reports");
    assert!(ev.centre.distance(at) < 0.5, "{:?}", ev.centre);
    let q = out.detection.expect("surface detected");
    let want = [
        Point2::new(60.0, 40.0),
        Point2::new(280.0, 40.0),
        Point2::new(280.0, 200.0),
        Point2::new(60.0, 200.0),
    ];
    for (got, want) in q.corners().iter().zip(want) {
        assert!(got.distance(want) <= 1.5, "{got:?} vs {want:?}");
    }
    assert!(p.display_object().homography().is_some());
}

#[test]
fn small_motion_is_gated_and_loss_resets() {
    let mut p = Pipeline::new(PipelineConfig::default());
    assert!(p
        .process(&frame(Some(Point2::new(150.0, 110.0))), 0)
        .move_event
        .is_some());
    assert!(p
        .process(&frame(Some(Point2::new(155.0, 113.0))), 33)
        .move_event
        .is_none());
    let ev = p
        .process(&frame(Some(Point2::new(159.0, 113.0))), 66)
        .move_event
        .expect("9 px in x fires");
    assert_eq!(ev.t, 66);
    for k in 0..MARKER_LOST_FRAMES as u64 {
        assert!(p.process(&frame(None), 100 + k * 33).move_event.is_none());
    }
    assert!(p.marker().reported_centre.is_none());
    // Back near the old spot: reported again since the reference is gone.
    assert!(p
        .process(&frame(Some(Point2::new(160.0, 113.0))), 400)
        .move_event
        .is_some());
}

#[test]
fn empty_desk_yields_nothing() {
    let mut p = Pipeline::new(PipelineConfig::default());
    let mut img = ImageRgb8::new(320, 240);
    img.as_raw_mut()
        .chunks_exact_mut(3)
        .for_each(|px| px.copy_from_slice(&BACKGROUND));
    let out = p.process(&img, 0);
    assert!(out.move_event.is_none() && out.detection.is_none() && out.marker_centre.is_none());
}
