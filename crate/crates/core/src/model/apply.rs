use super::{Effect, Element, Mode, ModelError, Rect, SessionState};
use crate::gesture::{GestureEvent, GestureKind, Payload, Target};

/// Size (w, h) of a freshly placed element.
pub const DEFAULT_SIZE: (f64, f64) = (0.2, 0.1);
/// Smallest width or height a resize can produce.
pub const MIN_SIZE: f64 = 0.02;

fn element_index(s: &SessionState, target: &Target) -> Result<usize, ModelError> {
    match target {
        Target::Element(id) => s
            .layout
            .iter()
            .position(|e| e.id == *id)
            .ok_or_else(|| ModelError::UnknownTarget(target.clone())),
        _ => Err(ModelError::UnknownTarget(target.clone())),
    }
}

fn scaled(r: Rect, k: f64) -> Rect {
    let c = r.centre();
    let w = (r.w * k).clamp(MIN_SIZE, 1.0);
    let h = (r.h * k).clamp(MIN_SIZE, 1.0);
    Rect::centred(c, w, h).clamped()
}

/// Applies one gesture to the session, returning any effects it fired.
///
/// On error the state is left untouched.
pub fn apply_gesture(s: &mut SessionState, g: &GestureEvent) -> Result<Vec<Effect>, ModelError> {
    let mut effects = Vec::new();
    match g.kind {
        GestureKind::Scan => {}
        GestureKind::Select => {
            match &g.target {
                Target::Slot(id) if s.palette.slot(id).is_some() => {}
                Target::Element(_) => {
                    element_index(s, &g.target)?;
                }
                other => return Err(ModelError::UnknownTarget(other.clone())),
            }
            s.selection = g.target.clone();
        }
        GestureKind::Place => {
            let Target::Slot(id) = &g.target else {
                return Err(ModelError::UnknownTarget(g.target.clone()));
            };
            let slot = s
                .palette
                .slot(id)
                .ok_or_else(|| ModelError::UnknownTarget(g.target.clone()))?;
            let Payload::Position(p) = g.payload else {
                return Err(ModelError::MissingPayload);
            };
            let element = Element {
                id: s.next_id(),
                kind: slot.kind,
                rect: Rect::centred(p, DEFAULT_SIZE.0, DEFAULT_SIZE.1).clamped(),
                label: slot.label.clone(),
                binding: slot.binding.clone(),
                locked: false,
            };
            s.layout.push(element);
            s.selection = Target::None;
        }
        GestureKind::Drag => {
            let i = element_index(s, &g.target)?;
            let Payload::Vector(d) = g.payload else {
                return Err(ModelError::MissingPayload);
            };
            let e = &mut s.layout[i];
            if !e.locked {
                e.rect = Rect {
                    x: e.rect.x + d.x,
                    y: e.rect.y + d.y,
                    ..e.rect
                }
                .clamped();
            }
        }
        GestureKind::Resize => {
            let i = element_index(s, &g.target)?;
            let Payload::Scale(k) = g.payload else {
                return Err(ModelError::MissingPayload);
            };
            let e = &mut s.layout[i];
            if !e.locked && k.is_finite() && k > 0.0 {
                e.rect = scaled(e.rect, k);
            }
        }
        GestureKind::Lock => {
            let i = element_index(s, &g.target)?;
            s.layout[i].locked = !s.layout[i].locked;
        }
        GestureKind::Click => {
            let i = element_index(s, &g.target)?;
            if s.mode == Mode::Run {
                let e = &s.layout[i];
                if let Some(b) = &e.binding {
                    effects.push(Effect {
                        t: g.t,
                        element: e.id,
                        action: b.action.clone(),
                    });
                }
            }
        }
        GestureKind::Wipe => {
            s.mode = s.mode.toggled();
            s.selection = Target::None;
        }
    }
    s.effects_log.extend(effects.iter().cloned());
    Ok(effects)
}
