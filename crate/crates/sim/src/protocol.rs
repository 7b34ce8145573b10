//! Session protocol: newline-delimited JSON objects, or one object per text
//! frame over WebSocket. Every message carries a sequence number `seq` and a
//! time `t` in ms beside its `type`.
//!
//! Client to server (`t` is client time; `seq` strictly increasing, `t`
//! nondecreasing):
//!
//! | type          | fields                              | effect                              |
//! |---------------|-------------------------------------|-------------------------------------|
//! | `marker_move` | `x`, `y` (image px)                 | marker drawn at (x, y) from now on  |
//! | `marker_hide` |                                     | marker leaves the view              |
//! | `tap`         |                                     | tap sound at the current frame time |
//! | `pose_set`    | `corners`: 4 × [x, y] or `null`     | display object moves or disappears  |
//!
//! Server to client (`t` is session time, the capture time of the latest
//! frame; `seq` counts from 0):
//!
//! | type       | fields                                                        |
//! |------------|---------------------------------------------------------------|
//! | `config`   | `frame_rate`, `width`, `height`, `strip` (palette slot layout)  |
//! | `snapshot` | `state`: mode, selection, phase, palette, layout, pose, marker |
//! | `event`    | `event`: a move, tap, gesture or effect line of the JSONL log  |
//! | `error`    | `message`; the server closes the connection after sending it  |
//!
//! The server sends `config` and a `snapshot` on connect, then per frame the
//! events it produced followed by a fresh `snapshot` whenever anything changed.

use serde::{Deserialize, Serialize};
use vip_core::gesture::{PaletteStrip, Phase, Target};
use vip_core::model::{Element, Mode, PaletteSlot};
use vip_core::vision::Point2;

use crate::engine::Session;
use crate::events::SessionEvent;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClientMessage {
    pub seq: u64,
    pub t: u64,
    #[serde(flatten)]
    pub body: ClientBody,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ClientBody {
    MarkerMove { x: f64, y: f64 },
    MarkerHide,
    Tap,
    PoseSet { corners: Option<[Point2; 4]> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ServerMessage {
    pub seq: u64,
    pub t: u64,
    #[serde(flatten)]
    pub body: ServerBody,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ServerBody {
    Config {
        frame_rate: u32,
        width: usize,
        height: usize,
        strip: PaletteStrip,
    },
    Snapshot {
        state: Snapshot,
    },
    Event {
        event: SessionEvent,
    },
    Error {
        message: String,
    },
}

/// Read-only view of the session for display.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Snapshot {
    pub mode: Mode,
    pub selection: Target,
    pub phase: Phase,
    pub palette: Vec<PaletteSlot>,
    pub layout: Vec<Element>,
    /// Tracked display-object corners, TL, TR, BR, BL.
    pub pose: Option<[Point2; 4]>,
    /// Marker centroid in the latest frame.
    pub marker: Option<Point2>,
}

impl Snapshot {
    pub fn of(session: &Session) -> Self {
        let s = session.state();
        Self {
            mode: s.mode,
            selection: s.selection.clone(),
            phase: session.fsm().phase,
            palette: s.palette.slots.clone(),
            layout: s.layout.clone(),
            pose: session.display_object().quad().map(|q| q.corners()),
            marker: session.pipeline().marker().live_centre,
        }
    }
}

/// Parses one client message and checks it against the previous ones.
#[derive(Debug, Clone, Default)]
pub struct ClientValidator {
    last: Option<(u64, u64)>,
}

impl ClientValidator {
    pub fn accept(&mut self, text: &str) -> Result<ClientMessage, String> {
        let msg: ClientMessage =
            serde_json::from_str(text.trim()).map_err(|e| format!("malformed message: {e}"))?;
        if let ClientBody::MarkerMove { x, y } = msg.body {
            if !(x.is_finite() && y.is_finite()) {
                return Err("marker position must be finite".into());
            }
        }
        if let Some((seq, t)) = self.last {
            if msg.seq <= seq {
                return Err(format!("seq {} does not follow {seq}", msg.seq));
            }
            if msg.t < t {
                return Err(format!("t {} is earlier than {t}", msg.t));
            }
        }
        self.last = Some((msg.seq, msg.t));
        Ok(msg)
    }
}
