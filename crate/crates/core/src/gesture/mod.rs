//! Touch fusion and the gesture state machine.
//!
//! A touch is a microphone tap paired with the marker position seen closest
//! in time. Touches and marker motion drive a small state machine that emits
//! the gesture vocabulary consumed by the prototype model.

mod fsm;
mod fuse;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::vision::Point2;

pub use fsm::{
    step_fsm, FsmContext, FsmInput, FsmState, PaletteStrip, Phase, CORNER_ZONE, HOLD_LOCK_MS,
    RELEASE_MS, SCAN_INTERVAL_MS, WIPE_FRACTION, WIPE_WINDOW_MS,
};
pub use fuse::{fuse, MarkerHistory, ASSOCIATION_WINDOW_MS};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TouchEvent {
    pub t: u64,
    pub image_pos: Point2,
    /// Unit-square surface coordinates; `None` when off the display object.
    pub model_pos: Option<Point2>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GestureKind {
    Scan,
    Select,
    Place,
    Drag,
    Resize,
    Wipe,
    Lock,
    Click,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    #[default]
    None,
    Element(u32),
    Slot(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Payload {
    #[default]
    None,
    /// Model-space position.
    Position(Point2),
    /// Model-space displacement.
    Vector(Point2),
    Scale(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GestureEvent {
    pub kind: GestureKind,
    pub t: u64,
    pub target: Target,
    pub payload: Payload,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GestureError {
    #[error("input at t={t} ms arrived after t={last} ms")]
    OutOfOrder { t: u64, last: u64 },
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_shapes() {
        let g = GestureEvent {
            kind: GestureKind::Drag,
            t: 10,
            target: Target::Element(3),
            payload: Payload::Vector(Point2::new(0.25, -0.5)),
        };
        assert_eq!(
            serde_json::to_string(&g).unwrap(),
            r#"{"kind":"drag","t":10,"target":{"element":3},"payload":{"vector":[0.25,-0.5]}}"#
        );
        let g = GestureEvent {
            kind: GestureKind::Wipe,
            t: 0,
            target: Target::None,
            payload: Payload::None,
        };
        assert_eq!(
            serde_json::to_string(&g).unwrap(),
            r#"{"kind":"wipe","t":0,"target":"none","payload":"none"}"#
        );
        let back: GestureEvent = serde_json::from_str(&serde_json::to_string(&g).unwrap()).unwrap();
        assert_eq!(back, g);
    }
}
