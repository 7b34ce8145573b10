//! Scripted world: display-object pose, marker path and tap times.
//!
//! Trajectories are keyframe lists. Between two keyframes the value is
//! interpolated linearly; a `null` keyframe hides the object from its time
//! until the next keyframe. Before the first and after the last keyframe the
//! nearest keyframe holds.

use serde::{Deserialize, Serialize};
use vip_core::vision::Point2;

use crate::error::SimError;
use crate::render::Scene;

pub const DEFAULT_FRAME_RATE: u32 = 30;
pub const DEFAULT_WIDTH: usize = 640;
pub const DEFAULT_HEIGHT: usize = 480;
/// HSV of the default marker: a saturated green.
pub const DEFAULT_MARKER_HSV: [u8; 3] = [85, 220, 230];

pub trait Lerp: Copy {
    fn lerp(a: Self, b: Self, f: f64) -> Self;
}

impl Lerp for Point2 {
    fn lerp(a: Self, b: Self, f: f64) -> Self {
        Point2::new(a.x + (b.x - a.x) * f, a.y + (b.y - a.y) * f)
    }
}

impl Lerp for [Point2; 4] {
    fn lerp(a: Self, b: Self, f: f64) -> Self {
        std::array::from_fn(|i| Point2::lerp(a[i], b[i], f))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Keyframe<T> {
    pub t: u64,
    pub at: Option<T>,
}

impl<T> Keyframe<T> {
    pub fn new(t: u64, at: Option<T>) -> Self {
        Self { t, at }
    }
}

/// Value of a keyframed trajectory at `t`.
pub fn sample<T: Lerp>(keys: &[Keyframe<T>], t: u64) -> Option<T> {
    let i = keys.partition_point(|k| k.t <= t);
    if i == 0 {
        return keys.first().and_then(|k| k.at);
    }
    let a = &keys[i - 1];
    match (a.at, keys.get(i).and_then(|b| b.at.map(|v| (b.t, v)))) {
        (Some(va), Some((tb, vb))) => Some(T::lerp(va, vb, (t - a.t) as f64 / (tb - a.t) as f64)),
        (va, _) => va,
    }
}

fn check_keys<T>(what: &str, keys: &[Keyframe<T>], duration: u64) -> Result<(), SimError> {
    if keys.windows(2).any(|w| w[0].t >= w[1].t) {
        return Err(SimError::Invalid(format!(
            "{what} keyframe times must be strictly increasing"
        )));
    }
    if keys.last().is_some_and(|k| k.t > duration) {
        return Err(SimError::Invalid(format!(
            "{what} keyframe after the end of the scenario"
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MarkerScript {
    /// Marker colour as 8-bit HSV.
    #[serde(default = "default_marker_hsv")]
    pub colour: [u8; 3],
    pub path: Vec<Keyframe<Point2>>,
}

fn default_marker_hsv() -> [u8; 3] {
    DEFAULT_MARKER_HSV
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Noise {
    /// Standard deviation of the per-pixel luminance noise, 8-bit units.
    #[serde(default)]
    pub luma_sigma: f64,
    /// RMS of the white audio noise, full scale = 1.
    #[serde(default)]
    pub audio_rms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WorldState {
    pub duration_ms: u64,
    #[serde(default = "default_frame_rate")]
    pub frame_rate: u32,
    #[serde(default = "default_width")]
    pub width: usize,
    #[serde(default = "default_height")]
    pub height: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub noise: Noise,
    /// Display-object corners TL, TR, BR, BL.
    #[serde(default)]
    pub pose: Vec<Keyframe<[Point2; 4]>>,
    #[serde(default)]
    pub marker: Option<MarkerScript>,
    /// Tap times, ms.
    #[serde(default)]
    pub taps: Vec<u64>,
}

fn default_frame_rate() -> u32 {
    DEFAULT_FRAME_RATE
}

fn default_width() -> usize {
    DEFAULT_WIDTH
}

fn default_height() -> usize {
    DEFAULT_HEIGHT
}

impl WorldState {
    /// Empty world of the default frame size.
    pub fn new(duration_ms: u64) -> Self {
        Self {
            duration_ms,
            frame_rate: DEFAULT_FRAME_RATE,
            width: DEFAULT_WIDTH,
            height: DEFAULT_HEIGHT,
            seed: 0,
            noise: Noise::default(),
            pose: Vec::new(),
            marker: None,
            taps: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.frame_rate == 0 {
            return Err(SimError::Invalid("frame_rate must be positive".into()));
        }
        if self.width < 16 || self.height < 16 {
            return Err(SimError::Invalid("frames must be at least 16x16".into()));
        }
        let finite_nonneg = |v: f64| v.is_finite() && v >= 0.0;
        if !finite_nonneg(self.noise.luma_sigma) || !finite_nonneg(self.noise.audio_rms) {
            return Err(SimError::Invalid(
                "noise levels must be finite and non-negative".into(),
            ));
        }
        check_keys("pose", &self.pose, self.duration_ms)?;
        if let Some(m) = &self.marker {
            check_keys("marker", &m.path, self.duration_ms)?;
        }
        if self.taps.windows(2).any(|w| w[0] > w[1]) {
            return Err(SimError::Invalid("tap times must be sorted".into()));
        }
        if self.taps.last().is_some_and(|&t| t >= self.duration_ms) {
            return Err(SimError::Invalid(
                "tap after the end of the scenario".into(),
            ));
        }
        Ok(())
    }

    pub fn pose_at(&self, t: u64) -> Option<[Point2; 4]> {
        sample(&self.pose, t)
    }

    pub fn marker_at(&self, t: u64) -> Option<Point2> {
        self.marker.as_ref().and_then(|m| sample(&m.path, t))
    }

    /// What the camera sees at `t`; times past the end hold the last keyframes.
    pub fn scene_at(&self, t: u64) -> Scene {
        Scene {
            pose: self.pose_at(t),
            marker: self.marker_at(t).map(|p| {
                (
                    p,
                    self.marker
                        .as_ref()
                        .map_or(DEFAULT_MARKER_HSV, |m| m.colour),
                )
            }),
        }
    }
}
