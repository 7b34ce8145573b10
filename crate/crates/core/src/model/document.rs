//! Session document: the persistent part of a [`SessionState`] as JSON.
//!
//! ```json
//! {"version": 1, "mode": "edit", "palette": [...], "actions": [...], "layout": [...]}
//! ```
//!
//! Selection and the effects log are not persisted.

use serde::{Deserialize, Serialize};

use super::{Action, Element, Mode, ModelError, Palette, PaletteSlot, SessionState};
use crate::gesture::Target;

pub const DOCUMENT_VERSION: u64 = 1;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Document {
    version: u64,
    mode: Mode,
    palette: Vec<PaletteSlot>,
    #[serde(default)]
    actions: Vec<Action>,
    layout: Vec<Element>,
}

fn parse_error(e: serde_json::Error) -> ModelError {
    ModelError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    }
}

/// Pretty-printed document with a trailing newline.
pub fn save_session(s: &SessionState) -> Vec<u8> {
    let doc = Document {
        version: DOCUMENT_VERSION,
        mode: s.mode,
        palette: s.palette.slots.clone(),
        actions: s.palette.actions.clone(),
        layout: s.layout.clone(),
    };
    let mut out = serde_json::to_vec_pretty(&doc).expect("session document serializes");
    out.push(b'\n');
    out
}

pub fn load_session(bytes: &[u8]) -> Result<SessionState, ModelError> {
    let value: serde_json::Value = serde_json::from_slice(bytes).map_err(parse_error)?;
    match value.get("version").and_then(|v| v.as_u64()) {
        Some(DOCUMENT_VERSION) => {}
        Some(found) => {
            return Err(ModelError::VersionMismatch {
                found,
                expected: DOCUMENT_VERSION,
            })
        }
        None => {
            return Err(ModelError::Invalid(
                "missing or non-integer \"version\"".into(),
            ))
        }
    }
    let doc: Document = serde_json::from_slice(bytes).map_err(parse_error)?;
    let state = SessionState {
        mode: doc.mode,
        layout: doc.layout,
        selection: Target::None,
        palette: Palette {
            slots: doc.palette,
            actions: doc.actions,
        },
        effects_log: Vec::new(),
    };
    state.validate()?;
    Ok(state)
}
