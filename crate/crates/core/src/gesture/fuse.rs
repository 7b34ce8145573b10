use std::collections::VecDeque;

use super::TouchEvent;
use crate::audio::TapEvent;
use crate::tracking::DisplayObjectTrack;
use crate::vision::Point2;

/// Largest tap-to-marker time gap that still forms a touch.
pub const ASSOCIATION_WINDOW_MS: u64 = 100;

/// Recent per-frame marker centroids, oldest first.
#[derive(Debug, Clone, Default)]
pub struct MarkerHistory {
    samples: VecDeque<(u64, Point2)>,
    keep_ms: u64,
}

impl MarkerHistory {
    /// History that forgets samples older than `keep_ms` before the newest.
    pub fn new(keep_ms: u64) -> Self {
        Self {
            samples: VecDeque::new(),
            keep_ms,
        }
    }

    pub fn push(&mut self, t: u64, centre: Point2) {
        debug_assert!(self.samples.back().is_none_or(|&(last, _)| last <= t));
        self.samples.push_back((t, centre));
        while self
            .samples
            .front()
            .is_some_and(|&(t0, _)| t0 + self.keep_ms < t)
        {
            self.samples.pop_front();
        }
    }

    pub fn samples(&self) -> impl Iterator<Item = &(u64, Point2)> {
        self.samples.iter()
    }

    /// Sample closest to `t`; the earlier one on a tie.
    pub fn nearest(&self, t: u64) -> Option<(u64, Point2)> {
        let i = self.samples.partition_point(|&(ts, _)| ts < t);
        let after = self.samples.get(i).copied();
        let before = i.checked_sub(1).and_then(|j| self.samples.get(j)).copied();
        match (before, after) {
            (Some(b), Some(a)) => Some(if t - b.0 <= a.0 - t { b } else { a }),
            (b, a) => b.or(a),
        }
    }
}

/// Unit-square position of `image_pos`, or `None` when it is off the surface.
pub(crate) fn model_position(dobj: &DisplayObjectTrack, image_pos: Point2) -> Option<Point2> {
    let (_, h) = dobj.pose()?;
    let m = h.inverse_warp(image_pos).ok()?;
    let inside = (0.0..=1.0).contains(&m.x) && (0.0..=1.0).contains(&m.y);
    inside.then_some(m)
}

/// Pairs a tap with the marker sample nearest in time.
pub fn fuse(
    tap: &TapEvent,
    markers: &MarkerHistory,
    dobj: &DisplayObjectTrack,
) -> Option<TouchEvent> {
    let (ts, image_pos) = markers.nearest(tap.t)?;
    if ts.abs_diff(tap.t) > ASSOCIATION_WINDOW_MS {
        return None;
    }
    Some(TouchEvent {
        t: tap.t,
        image_pos,
        model_pos: model_position(dobj, image_pos),
    })
}
