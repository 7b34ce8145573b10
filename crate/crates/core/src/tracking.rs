//! Frame-to-frame tracking of the finger marker and the display object.
//!
//! A marker only reports a new position when its centroid has moved at least
//! [`GATE_PX`] along either axis from the last reported one, which keeps the
//! event stream quiet while the finger rests. The display object reuses the
//! same gate on its corners so its pose does not jitter with edge noise.

use serde::{Deserialize, Serialize};

use crate::edge::{homography_from_quad, Homography, Quad};
use crate::vision::{centroid, mask_hull, BinaryMask, HsvThresholds, Point2};

/// Per-axis displacement that counts as motion.
pub const GATE_PX: f64 = 8.0;
/// Consecutive empty masks after which a marker is considered gone.
pub const MARKER_LOST_FRAMES: u32 = 5;
/// Frames a display-object pose is held without a detection.
pub const DISPLAY_HOLD_FRAMES: u32 = 15;

/// True when `next` is far enough from `reference` to be reported.
pub fn gate_fires(reference: Point2, next: Point2) -> bool {
    (next.x - reference.x).abs() >= GATE_PX || (next.y - reference.y).abs() >= GATE_PX
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoveEvent {
    pub marker_id: u32,
    pub t: u64,
    pub centre: Point2,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarkerTrack {
    pub marker_id: u32,
    pub thresholds: HsvThresholds,
    /// Last centre that was emitted as a [`MoveEvent`].
    pub reported_centre: Option<Point2>,
    /// Centroid in the most recent frame.
    pub live_centre: Option<Point2>,
    pub hull: Vec<Point2>,
    pub lost_frames: u32,
}

impl MarkerTrack {
    pub fn new(marker_id: u32, thresholds: HsvThresholds) -> Self {
        Self {
            marker_id,
            thresholds,
            reported_centre: None,
            live_centre: None,
            hull: Vec::new(),
            lost_frames: 0,
        }
    }

    /// In-place form of [`update_marker`].
    pub fn update(&mut self, mask: &BinaryMask, t: u64) -> Option<MoveEvent> {
        let c = centroid(mask);
        let event = self.observe(c, t);
        if c.is_some() {
            self.hull = mask_hull(mask);
        }
        event
    }

    /// Advances the track by one centroid observation (`None` for an empty mask).
    pub fn observe(&mut self, centre: Option<Point2>, t: u64) -> Option<MoveEvent> {
        self.live_centre = centre;
        let Some(c) = centre else {
            self.hull.clear();
            self.lost_frames = self.lost_frames.saturating_add(1);
            if self.lost_frames >= MARKER_LOST_FRAMES {
                self.reported_centre = None;
            }
            return None;
        };
        self.lost_frames = 0;
        let fire = match self.reported_centre {
            None => true,
            Some(r) => gate_fires(r, c),
        };
        fire.then(|| {
            self.reported_centre = Some(c);
            MoveEvent {
                marker_id: self.marker_id,
                t,
                centre: c,
            }
        })
    }
}

/// Updates a marker track from its scrubbed mask for the frame at `t`.
pub fn update_marker(
    mut track: MarkerTrack,
    mask: &BinaryMask,
    t: u64,
) -> (MarkerTrack, Option<MoveEvent>) {
    let event = track.update(mask, t);
    (track, event)
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DisplayObjectTrack {
    quad: Option<Quad>,
    homography: Option<Homography>,
    pub stale_frames: u32,
}

impl DisplayObjectTrack {
    pub fn quad(&self) -> Option<&Quad> {
        self.quad.as_ref()
    }

    pub fn homography(&self) -> Option<&Homography> {
        self.homography.as_ref()
    }

    /// Both pose parts, present together or not at all.
    pub fn pose(&self) -> Option<(&Quad, &Homography)> {
        self.quad.as_ref().zip(self.homography.as_ref())
    }

    /// Track holding `quad` directly, e.g. a pose set by the world controller.
    pub fn with_pose(quad: Quad) -> Option<Self> {
        let h = homography_from_quad(&quad).ok()?;
        Some(Self {
            quad: Some(quad),
            homography: Some(h),
            stale_frames: 0,
        })
    }
}

/// Advances the display-object track by one frame's detection.
///
/// A detection whose homography cannot be solved counts as a miss.
pub fn update_display_object(
    mut track: DisplayObjectTrack,
    detection: Option<Quad>,
) -> DisplayObjectTrack {
    let solved = detection.and_then(|q| homography_from_quad(&q).ok().map(|h| (q, h)));
    match solved {
        Some((q, h)) => {
            let replace = match &track.quad {
                None => true,
                Some(held) => held.max_corner_shift(&q) >= GATE_PX,
            };
            if replace {
                track.quad = Some(q);
                track.homography = Some(h);
            }
            track.stale_frames = 0;
        }
        None => {
            if track.quad.is_some() {
                track.stale_frames += 1;
                if track.stale_frames >= DISPLAY_HOLD_FRAMES {
                    track.quad = None;
                    track.homography = None;
                }
            }
        }
    }
    track
}
