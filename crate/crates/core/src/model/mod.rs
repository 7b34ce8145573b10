//! The prototype being designed: palette, placed elements, action bindings,
//! edit/run mode and the effects fired while simulating.

mod apply;
mod document;
mod render;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::gesture::Target;
use crate::vision::Point2;

pub use apply::{apply_gesture, DEFAULT_SIZE, MIN_SIZE};
pub use document::{load_session, save_session, DOCUMENT_VERSION};
pub use render::{kind_colour, render_layout, SELECTION_COLOUR};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("gesture target {0:?} does not exist")]
    UnknownTarget(Target),
    #[error("gesture is missing its payload")]
    MissingPayload,
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("unsupported document version {found} (expected {expected})")]
    VersionMismatch { found: u64, expected: u64 },
    #[error("invalid session: {0}")]
    Invalid(String),
}

/// Axis-aligned rectangle in unit-square model coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 4]", into = "[f64; 4]")]
pub struct Rect {
    pub x: f64,
    pub y: f64,
    pub w: f64,
    pub h: f64,
}

impl From<[f64; 4]> for Rect {
    fn from([x, y, w, h]: [f64; 4]) -> Self {
        Rect { x, y, w, h }
    }
}

impl From<Rect> for [f64; 4] {
    fn from(r: Rect) -> Self {
        [r.x, r.y, r.w, r.h]
    }
}

impl Rect {
    pub fn centred(c: Point2, w: f64, h: f64) -> Self {
        Rect {
            x: c.x - w / 2.0,
            y: c.y - h / 2.0,
            w,
            h,
        }
    }

    pub fn centre(&self) -> Point2 {
        Point2::new(self.x + self.w / 2.0, self.y + self.h / 2.0)
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.x && p.x <= self.x + self.w && p.y >= self.y && p.y <= self.y + self.h
    }

    /// Corners TL, TR, BR, BL.
    pub fn corners(&self) -> [Point2; 4] {
        let (x1, y1) = (self.x + self.w, self.y + self.h);
        [
            Point2::new(self.x, self.y),
            Point2::new(x1, self.y),
            Point2::new(x1, y1),
            Point2::new(self.x, y1),
        ]
    }

    /// True when `p` lies in the outer `fraction` band of the rect along both axes.
    pub fn in_corner_zone(&self, p: Point2, fraction: f64) -> bool {
        if !self.contains(p) {
            return false;
        }
        let (u, v) = ((p.x - self.x) / self.w, (p.y - self.y) / self.h);
        let edge = |s: f64| s <= fraction || s >= 1.0 - fraction;
        edge(u) && edge(v)
    }

    /// Inside [0,1]² with positive size, allowing one rounding step at the far edges.
    pub fn within_unit(&self) -> bool {
        const EPS: f64 = 1e-12;
        self.w > 0.0
            && self.h > 0.0
            && self.x >= 0.0
            && self.y >= 0.0
            && self.x + self.w <= 1.0 + EPS
            && self.y + self.h <= 1.0 + EPS
    }

    /// Shifts (and if needed shrinks) the rect so it lies inside [0,1]².
    pub fn clamped(self) -> Rect {
        let w = self.w.min(1.0);
        let h = self.h.min(1.0);
        Rect {
            x: self.x.clamp(0.0, 1.0 - w),
            y: self.y.clamp(0.0, 1.0 - h),
            w,
            h,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElementKind {
    Input,
    Output,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Action {
    MovieStart,
    MovieStop,
    MovieScroll,
    Custom(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionBinding {
    pub action: Action,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, String>,
}

impl ActionBinding {
    pub fn new(action: Action) -> Self {
        Self {
            action,
            params: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Element {
    pub id: u32,
    pub kind: ElementKind,
    pub rect: Rect,
    pub label: String,
    pub binding: Option<ActionBinding>,
    #[serde(default)]
    pub locked: bool,
}

/// An element prototype offered by the palette.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PaletteSlot {
    pub id: String,
    pub kind: ElementKind,
    pub label: String,
    #[serde(default)]
    pub binding: Option<ActionBinding>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Palette {
    pub slots: Vec<PaletteSlot>,
    #[serde(default)]
    pub actions: Vec<Action>,
}

impl Palette {
    pub fn slot(&self, id: &str) -> Option<&PaletteSlot> {
        self.slots.iter().find(|s| s.id == id)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        for (i, s) in self.slots.iter().enumerate() {
            if self.slots[..i].iter().any(|o| o.id == s.id) {
                return Err(ModelError::Invalid(format!(
                    "duplicate palette slot {:?}",
                    s.id
                )));
            }
        }
        Ok(())
    }

    /// Phone-style default: two buttons, a screen and a scroll wheel.
    pub fn standard() -> Self {
        let slot = |id: &str, kind, label: &str, action: Option<Action>| PaletteSlot {
            id: id.into(),
            kind,
            label: label.into(),
            binding: action.map(ActionBinding::new),
        };
        Palette {
            slots: vec![
                slot("play", ElementKind::Input, "Play", Some(Action::MovieStart)),
                slot("stop", ElementKind::Input, "Stop", Some(Action::MovieStop)),
                slot(
                    "scroll",
                    ElementKind::Input,
                    "Scroll",
                    Some(Action::MovieScroll),
                ),
                slot("screen", ElementKind::Output, "Screen", None),
            ],
            actions: vec![Action::MovieStart, Action::MovieStop, Action::MovieScroll],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Edit,
    Run,
}

impl Mode {
    pub fn toggled(self) -> Mode {
        match self {
            Mode::Edit => Mode::Run,
            Mode::Run => Mode::Edit,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Effect {
    pub t: u64,
    pub element: u32,
    pub action: Action,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SessionState {
    pub mode: Mode,
    pub layout: Vec<Element>,
    pub selection: Target,
    pub palette: Palette,
    pub effects_log: Vec<Effect>,
}

impl SessionState {
    pub fn new(palette: Palette) -> Self {
        Self {
            palette,
            ..Self::default()
        }
    }

    pub fn element(&self, id: u32) -> Option<&Element> {
        self.layout.iter().find(|e| e.id == id)
    }

    /// Topmost element containing the model point (later elements paint over earlier ones).
    pub fn element_at(&self, p: Point2) -> Option<&Element> {
        self.layout.iter().rev().find(|e| e.rect.contains(p))
    }

    pub fn next_id(&self) -> u32 {
        self.layout.iter().map(|e| e.id).max().map_or(1, |m| m + 1)
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        self.palette.validate()?;
        for (i, e) in self.layout.iter().enumerate() {
            if self.layout[..i].iter().any(|o| o.id == e.id) {
                return Err(ModelError::Invalid(format!(
                    "duplicate element id {}",
                    e.id
                )));
            }
            if !e.rect.within_unit() {
                return Err(ModelError::Invalid(format!(
                    "element {} lies outside the unit square",
                    e.id
                )));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rect_helpers() {
        let r = Rect {
            x: 0.4,
            y: 0.4,
            w: 0.2,
            h: 0.1,
        };
        assert!(r.contains(Point2::new(0.5, 0.45)));
        assert!(!r.contains(Point2::new(0.7, 0.45)));
        assert!(r.in_corner_zone(Point2::new(0.59, 0.49), 0.15));
        assert!(!r.in_corner_zone(Point2::new(0.5, 0.49), 0.15));
        assert_eq!(
            Rect {
                x: 0.9,
                y: -0.1,
                w: 0.2,
                h: 0.1
            }
            .clamped(),
            Rect {
                x: 0.8,
                y: 0.0,
                w: 0.2,
                h: 0.1
            }
        );
        assert_eq!(
            Rect {
                x: 0.5,
                y: 0.5,
                w: 1.5,
                h: 0.1
            }
            .clamped()
            .w,
            1.0
        );
    }

    #[test]
    fn json_shapes() {
        let e = Element {
            id: 2,
            kind: ElementKind::Input,
            rect: Rect {
                x: 0.25,
                y: 0.5,
                w: 0.2,
                h: 0.1,
            },
            label: "Play".into(),
            binding: Some(ActionBinding::new(Action::Custom("beep".into()))),
            locked: false,
        };
        let s = serde_json::to_string(&e).unwrap();
        assert_eq!(
            s,
            r#"{"id":2,"kind":"input","rect":[0.25,0.5,0.2,0.1],"label":"Play","binding":{"action":{"custom":"beep"}},"locked":false}"#
        );
        assert_eq!(serde_json::from_str::<Element>(&s).unwrap(), e);
        assert_eq!(
            serde_json::to_string(&Action::MovieStart).unwrap(),
            r#""movie_start""#
        );
    }

    #[test]
    fn palette_rejects_duplicate_slots() {
        let mut p = Palette::standard();
        assert!(p.validate().is_ok());
        p.slots.push(p.slots[0].clone());
        assert!(p.validate().is_err());
    }

    #[test]
    fn ids_and_hit_testing() {
        let mut s = SessionState::new(Palette::standard());
        assert_eq!(s.next_id(), 1);
        let el = |id, x| Element {
            id,
            kind: ElementKind::Output,
            rect: Rect {
                x,
                y: 0.0,
                w: 0.5,
                h: 0.5,
            },
            label: String::new(),
            binding: None,
            locked: false,
        };
        s.layout = vec![el(4, 0.0), el(2, 0.25)];
        assert_eq!(s.next_id(), 5);
        assert_eq!(s.element_at(Point2::new(0.3, 0.1)).unwrap().id, 2);
        assert_eq!(s.element_at(Point2::new(0.1, 0.1)).unwrap().id, 4);
        assert!(s.element_at(Point2::new(0.9, 0.9)).is_none());
    }
}
