//! Gesture state machine.
//!
//! The microphone only reports onsets, so how long a touch lasts is inferred
//! from marker motion:
//!
//! * a touch that never moves is held for [`HOLD_LOCK_MS`]; on an element in
//!   edit mode that hold is a Lock, otherwise the touch simply ends;
//! * once the marker moves, the touch ends [`RELEASE_MS`] after the last
//!   motion event;
//! * a new tap always ends the previous touch.
//!
//! | mode | touch on            | condition                        | emits          | phase    |
//! |------|---------------------|----------------------------------|----------------|----------|
//! | Edit | palette slot        |                                  | Select(slot)   | Idle     |
//! | Edit | element E           | E selected, corner zone, unlocked| -              | Resizing |
//! | Edit | element E           | otherwise                        | Select(E)      | Touching |
//! | Edit | empty surface       | a slot is selected               | Place(slot)    | Touching |
//! | Edit | empty surface       | otherwise                        | -              | Touching |
//! | Run  | element E           |                                  | Click(E)       | Touching |
//! | Run  | empty surface       |                                  | -              | Touching |
//!
//! Motion while Idle emits Scan (rate limited). Motion while Touching first
//! checks for a Wipe, then starts a Drag when the touch is on an unlocked
//! element in edit mode. Dragging emits the model-space step of every
//! motion event; Resizing emits the ratio of successive distances from the
//! element centre.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::fuse::model_position;
use super::{GestureError, GestureEvent, GestureKind, Payload, Target, TouchEvent};
use crate::model::{Mode, SessionState};
use crate::tracking::{DisplayObjectTrack, MoveEvent};
use crate::vision::Point2;

pub const HOLD_LOCK_MS: u64 = 800;
pub const RELEASE_MS: u64 = 300;
pub const SCAN_INTERVAL_MS: u64 = 100;
pub const WIPE_WINDOW_MS: u64 = 500;
/// Horizontal sweep, as a fraction of the quad width, that makes a wipe.
pub const WIPE_FRACTION: f64 = 0.5;
/// Outer fraction of an element rect (on both axes) that starts a resize.
pub const CORNER_ZONE: f64 = 0.15;

/// Palette as a vertical strip of slots in camera-image coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PaletteStrip {
    pub x0: f64,
    pub x1: f64,
    pub top: f64,
    pub slot_height: f64,
    pub gap: f64,
}

impl Default for PaletteStrip {
    fn default() -> Self {
        Self {
            x0: 8.0,
            x1: 88.0,
            top: 16.0,
            slot_height: 56.0,
            gap: 8.0,
        }
    }
}

impl PaletteStrip {
    /// (x0, y0, x1, y1) of slot `i`.
    pub fn slot_rect(&self, i: usize) -> (f64, f64, f64, f64) {
        let y0 = self.top + i as f64 * (self.slot_height + self.gap);
        (self.x0, y0, self.x1, y0 + self.slot_height)
    }

    pub fn slot_centre(&self, i: usize) -> Point2 {
        let (x0, y0, x1, y1) = self.slot_rect(i);
        Point2::new((x0 + x1) / 2.0, (y0 + y1) / 2.0)
    }

    pub fn slot_at(&self, p: Point2, slots: usize) -> Option<usize> {
        (0..slots).find(|&i| {
            let (x0, y0, x1, y1) = self.slot_rect(i);
            p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1
        })
    }
}

/// What the machine reads but does not own.
#[derive(Debug, Clone, Copy)]
pub struct FsmContext<'a> {
    pub session: &'a SessionState,
    pub dobj: &'a DisplayObjectTrack,
    pub strip: &'a PaletteStrip,
}

#[derive(Debug, Clone, PartialEq)]
pub enum FsmInput {
    Touch(TouchEvent),
    Move(MoveEvent),
    Tick(u64),
}

impl FsmInput {
    pub fn t(&self) -> u64 {
        match self {
            FsmInput::Touch(e) => e.t,
            FsmInput::Move(e) => e.t,
            FsmInput::Tick(t) => *t,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    #[default]
    Idle,
    Touching,
    Dragging,
    Resizing,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct FsmState {
    pub mode: Mode,
    pub selection: Target,
    pub phase: Phase,
    /// Time and model position of the current touch.
    pub touch_anchor: Option<(u64, Point2)>,
    /// Image positions of the current touch within the wipe window.
    pub recent_positions: VecDeque<(u64, Point2)>,
    touch_target: Option<u32>,
    last_motion: Option<u64>,
    last_model: Option<Point2>,
    last_scan: Option<u64>,
    last_t: Option<u64>,
}

impl FsmState {
    pub fn new() -> Self {
        Self::default()
    }

    fn release(&mut self) {
        self.phase = Phase::Idle;
        self.touch_anchor = None;
        self.recent_positions.clear();
        self.touch_target = None;
        self.last_motion = None;
        self.last_model = None;
    }

    fn begin_touch(
        &mut self,
        t: u64,
        image: Point2,
        model: Point2,
        target: Option<u32>,
        phase: Phase,
    ) {
        self.phase = phase;
        self.touch_anchor = Some((t, model));
        self.recent_positions.clear();
        self.recent_positions.push_back((t, image));
        self.touch_target = target;
        self.last_motion = None;
        self.last_model = Some(model);
    }

    /// Ends a touch whose hold or release time has passed.
    fn advance(&mut self, t: u64, out: &mut Vec<GestureEvent>) {
        let Some((t0, _)) = self.touch_anchor else {
            return;
        };
        match self.last_motion {
            None if t >= t0 + HOLD_LOCK_MS => {
                if let (Phase::Touching, Mode::Edit, Some(id)) =
                    (self.phase, self.mode, self.touch_target)
                {
                    out.push(event(
                        GestureKind::Lock,
                        t,
                        Target::Element(id),
                        Payload::None,
                    ));
                }
                self.release();
            }
            Some(m) if t >= m + RELEASE_MS => self.release(),
            _ => {}
        }
    }

    fn wipe_detected(&self, quad_width: f64) -> bool {
        let mut it = self.recent_positions.iter().rev();
        let Some(&(_, newest)) = it.next() else {
            return false;
        };
        let mut dir = 0.0;
        let mut prev = newest.x;
        let mut far = newest.x;
        for &(_, p) in it {
            let step = prev - p.x;
            if step != 0.0 {
                if dir == 0.0 {
                    dir = step.signum();
                } else if step.signum() != dir {
                    break;
                }
            }
            prev = p.x;
            far = p.x;
        }
        (newest.x - far).abs() >= WIPE_FRACTION * quad_width
    }
}

fn event(kind: GestureKind, t: u64, target: Target, payload: Payload) -> GestureEvent {
    GestureEvent {
        kind,
        t,
        target,
        payload,
    }
}

fn on_touch(s: &mut FsmState, ctx: &FsmContext, te: &TouchEvent, out: &mut Vec<GestureEvent>) {
    if s.phase != Phase::Idle {
        s.release();
    }
    let t = te.t;
    let Some(m) = te.model_pos else {
        if s.mode == Mode::Edit {
            let slots = &ctx.session.palette.slots;
            if let Some(i) = ctx.strip.slot_at(te.image_pos, slots.len()) {
                let target = Target::Slot(slots[i].id.clone());
                s.selection = target.clone();
                out.push(event(GestureKind::Select, t, target, Payload::None));
            }
        }
        return;
    };
    let hit = ctx.session.element_at(m);
    match (s.mode, hit) {
        (Mode::Edit, Some(e)) => {
            let resize = s.selection == Target::Element(e.id)
                && !e.locked
                && e.rect.in_corner_zone(m, CORNER_ZONE);
            if resize {
                s.begin_touch(t, te.image_pos, m, Some(e.id), Phase::Resizing);
            } else {
                s.selection = Target::Element(e.id);
                out.push(event(
                    GestureKind::Select,
                    t,
                    Target::Element(e.id),
                    Payload::None,
                ));
                s.begin_touch(t, te.image_pos, m, Some(e.id), Phase::Touching);
            }
        }
        (Mode::Edit, None) => {
            if let Target::Slot(id) = &s.selection {
                out.push(event(
                    GestureKind::Place,
                    t,
                    Target::Slot(id.clone()),
                    Payload::Position(m),
                ));
                s.selection = Target::None;
            }
            s.begin_touch(t, te.image_pos, m, None, Phase::Touching);
        }
        (Mode::Run, Some(e)) => {
            out.push(event(
                GestureKind::Click,
                t,
                Target::Element(e.id),
                Payload::None,
            ));
            s.begin_touch(t, te.image_pos, m, Some(e.id), Phase::Touching);
        }
        (Mode::Run, None) => s.begin_touch(t, te.image_pos, m, None, Phase::Touching),
    }
}

fn on_move(s: &mut FsmState, ctx: &FsmContext, me: &MoveEvent, out: &mut Vec<GestureEvent>) {
    let t = me.t;
    let model = model_position(ctx.dobj, me.centre);
    if s.phase == Phase::Idle {
        if s.last_scan.is_none_or(|last| t >= last + SCAN_INTERVAL_MS) {
            let target = match model {
                Some(m) => ctx
                    .session
                    .element_at(m)
                    .map_or(Target::None, |e| Target::Element(e.id)),
                None => {
                    let slots = &ctx.session.palette.slots;
                    ctx.strip
                        .slot_at(me.centre, slots.len())
                        .map_or(Target::None, |i| Target::Slot(slots[i].id.clone()))
                }
            };
            out.push(event(
                GestureKind::Scan,
                t,
                target,
                model.map_or(Payload::None, Payload::Position),
            ));
            s.last_scan = Some(t);
        }
        return;
    }

    s.last_motion = Some(t);
    s.recent_positions.push_back((t, me.centre));
    while s
        .recent_positions
        .front()
        .is_some_and(|&(t0, _)| t0 + WIPE_WINDOW_MS < t)
    {
        s.recent_positions.pop_front();
    }
    let target = s.touch_target;
    let element = target.and_then(|id| ctx.session.element(id));
    match s.phase {
        Phase::Touching => {
            if let Some(q) = ctx.dobj.quad() {
                if s.wipe_detected(q.width()) {
                    out.push(event(GestureKind::Wipe, t, Target::None, Payload::None));
                    s.mode = s.mode.toggled();
                    s.selection = Target::None;
                    s.release();
                    return;
                }
            }
            let Some(m) = model else { return };
            if let (Mode::Edit, Some(e)) = (s.mode, element) {
                if !e.locked {
                    s.phase = Phase::Dragging;
                    drag_step(s, e.id, t, m, out);
                    return;
                }
            }
            s.last_model = Some(m);
        }
        Phase::Dragging => {
            if let (Some(m), Some(id)) = (model, target) {
                drag_step(s, id, t, m, out);
            }
        }
        Phase::Resizing => {
            if let (Some(m), Some(e), Some(prev)) = (model, element, s.last_model) {
                let c = e.rect.centre();
                let r0 = prev.distance(c);
                if r0 > 1e-9 {
                    let k = m.distance(c) / r0;
                    out.push(event(
                        GestureKind::Resize,
                        t,
                        Target::Element(e.id),
                        Payload::Scale(k),
                    ));
                }
                s.last_model = Some(m);
            }
        }
        Phase::Idle => unreachable!(),
    }
}

fn drag_step(s: &mut FsmState, id: u32, t: u64, m: Point2, out: &mut Vec<GestureEvent>) {
    let prev = s.last_model.unwrap_or(m);
    let d = Point2::new(m.x - prev.x, m.y - prev.y);
    out.push(event(
        GestureKind::Drag,
        t,
        Target::Element(id),
        Payload::Vector(d),
    ));
    s.last_model = Some(m);
}

/// Feeds one input to the machine; inputs must arrive in nondecreasing time.
pub fn step_fsm(
    s: &mut FsmState,
    ctx: &FsmContext,
    input: &FsmInput,
) -> Result<Vec<GestureEvent>, GestureError> {
    let t = input.t();
    if let Some(last) = s.last_t {
        if t < last {
            return Err(GestureError::OutOfOrder { t, last });
        }
    }
    s.last_t = Some(t);
    let mut out = Vec::new();
    s.advance(t, &mut out);
    match input {
        FsmInput::Touch(te) => on_touch(s, ctx, te, &mut out),
        FsmInput::Move(me) => on_move(s, ctx, me, &mut out),
        FsmInput::Tick(_) => {}
    }
    Ok(out)
}
