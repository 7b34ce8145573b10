//! The session event stream, one JSON object per line.
//!
//! ```text
//! {"type":"move","marker":0,"t":1000,"x":292.0,"y":212.0}
//! {"type":"tap","t":1200,"peak":0.79}
//! {"type":"gesture","kind":"place","t":1200,"target":{"slot":"play"},"payload":{"position":[0.3,0.4]}}
//! {"type":"effect","t":4800,"element":1,"action":"movie_start"}
//! ```

use serde::{Deserialize, Serialize};
use vip_core::audio::TapEvent;
use vip_core::gesture::GestureEvent;
use vip_core::model::Effect;
use vip_core::tracking::MoveEvent;

use crate::error::SimError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SessionEvent {
    Move { marker: u32, t: u64, x: f64, y: f64 },
    Tap { t: u64, peak: f64 },
    Gesture(GestureEvent),
    Effect(Effect),
}

impl SessionEvent {
    pub fn t(&self) -> u64 {
        match self {
            SessionEvent::Move { t, .. } | SessionEvent::Tap { t, .. } => *t,
            SessionEvent::Gesture(g) => g.t,
            SessionEvent::Effect(e) => e.t,
        }
    }
}

impl From<&MoveEvent> for SessionEvent {
    fn from(m: &MoveEvent) -> Self {
        SessionEvent::Move {
            marker: m.marker_id,
            t: m.t,
            x: m.centre.x,
            y: m.centre.y,
        }
    }
}

impl From<&TapEvent> for SessionEvent {
    fn from(tap: &TapEvent) -> Self {
        SessionEvent::Tap {
            t: tap.t,
            peak: tap.peak,
        }
    }
}

pub fn to_jsonl(events: &[SessionEvent]) -> String {
    let mut out = String::new();
    for e in events {
        out.push_str(&serde_json::to_string(e).expect("events serialize"));
        out.push('\n');
    }
    out
}

/// Parses a JSONL stream; blank lines are skipped. Line numbers in errors
/// count from 1 over the whole stream.
pub fn read_jsonl(text: &str) -> Result<Vec<SessionEvent>, SimError> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let e = serde_json::from_str(line).map_err(|e| SimError::Parse {
            line: i + 1,
            column: e.column(),
            message: e.to_string(),
        })?;
        out.push(e);
    }
    Ok(out)
}
