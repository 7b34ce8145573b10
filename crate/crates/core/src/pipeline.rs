//! Per-frame perception: marker segmentation and display-object detection,
//! feeding the two trackers.

use serde::{Deserialize, Serialize};

use crate::edge::{canny, extract_quad, CannyParams, EdgeMap, Quad};
use crate::tracking::{update_display_object, DisplayObjectTrack, MarkerTrack, MoveEvent};
use crate::vision::{
    achromatic_luma, gaussian_blur, pyramid_scrub, rgb_to_hsv, segment, BinaryMask, HsvThresholds,
    ImageRgb8, Point2,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineConfig {
    pub marker_id: u32,
    pub marker: HsvThresholds,
    /// Pre-segmentation blur, px.
    pub blur_sigma: f64,
    pub canny: CannyParams,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            marker_id: 0,
            marker: HsvThresholds::new(70, 100, 110, 255, 90, 255)
                .expect("valid default thresholds"),
            blur_sigma: 1.0,
            canny: CannyParams::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrameOutput {
    pub t: u64,
    pub move_event: Option<MoveEvent>,
    /// Centroid of the marker in this frame, gated or not.
    pub marker_centre: Option<Point2>,
    /// Raw display-object detection before pose gating.
    pub detection: Option<Quad>,
}

/// Intermediate images of one frame, for dumping and debugging.
#[derive(Debug, Clone)]
pub struct FrameImages {
    pub mask: BinaryMask,
    pub edges: EdgeMap,
}

#[derive(Debug, Clone)]
pub struct Pipeline {
    config: PipelineConfig,
    marker: MarkerTrack,
    dobj: DisplayObjectTrack,
}

impl Pipeline {
    pub fn new(config: PipelineConfig) -> Self {
        Self {
            marker: MarkerTrack::new(config.marker_id, config.marker),
            dobj: DisplayObjectTrack::default(),
            config,
        }
    }

    pub fn config(&self) -> &PipelineConfig {
        &self.config
    }

    pub fn marker(&self) -> &MarkerTrack {
        &self.marker
    }

    pub fn display_object(&self) -> &DisplayObjectTrack {
        &self.dobj
    }

    /// Marker mask and edge map of `frame`.
    pub fn analyse(&self, frame: &ImageRgb8) -> FrameImages {
        let blurred = gaussian_blur(frame, self.config.blur_sigma);
        let mask = pyramid_scrub(&segment(&rgb_to_hsv(&blurred), &self.config.marker));
        let edges = canny(&achromatic_luma(frame), &self.config.canny);
        FrameImages { mask, edges }
    }

    pub fn process(&mut self, frame: &ImageRgb8, t: u64) -> FrameOutput {
        let FrameImages { mask, edges } = self.analyse(frame);
        let detection = extract_quad(&edges);
        let move_event = self.marker.update(&mask, t);
        self.dobj = update_display_object(self.dobj, detection);
        FrameOutput {
            t,
            move_event,
            marker_centre: self.marker.live_centre,
            detection,
        }
    }
}
