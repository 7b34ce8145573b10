//! The session loop: frames and audio in, events out.
//!
//! Perception runs as soon as a frame arrives. Marker moves, taps, touches
//! and ticks then wait in a queue ordered by timestamp and are handed to the
//! gesture machine only once nothing earlier can still show up. A tap waits
//! until the marker history holds a sample at or after its time (the nearest
//! sample is then settled) or the association window has passed.

use std::collections::{BTreeMap, VecDeque};

use serde::{Deserialize, Serialize};
use vip_core::audio::{
    BandPassFilter, BandPassSpec, TapDetector, TapEvent, DEFAULT_REFRACTORY_MS, DEFAULT_THRESHOLD,
};
use vip_core::gesture::{
    fuse, step_fsm, FsmContext, FsmInput, FsmState, MarkerHistory, PaletteStrip, TouchEvent,
    ASSOCIATION_WINDOW_MS,
};
use vip_core::model::{apply_gesture, Palette, SessionState};
use vip_core::pipeline::{FrameOutput, Pipeline, PipelineConfig};
use vip_core::tracking::{DisplayObjectTrack, MoveEvent};
use vip_core::vision::ImageRgb8;

use crate::error::SimError;
use crate::events::SessionEvent;

/// How long marker samples and display-object poses are remembered, ms.
const HISTORY_MS: u64 = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SessionConfig {
    pub pipeline: PipelineConfig,
    pub band: BandPassSpec,
    pub tap_threshold: f64,
    pub refractory_ms: u64,
    pub strip: PaletteStrip,
}

impl Default for SessionConfig {
    fn default() -> Self {
        Self {
            pipeline: PipelineConfig::default(),
            band: BandPassSpec::default(),
            tap_threshold: DEFAULT_THRESHOLD,
            refractory_ms: DEFAULT_REFRACTORY_MS,
            strip: PaletteStrip::default(),
        }
    }
}

#[derive(Debug, Clone)]
enum Item {
    Move(MoveEvent),
    Tap(TapEvent),
    Touch(TouchEvent),
    Tick(u64),
}

impl Item {
    /// Order among items with equal timestamps.
    fn rank(&self) -> u8 {
        match self {
            Item::Move(_) => 0,
            Item::Tap(_) => 1,
            Item::Touch(_) => 2,
            Item::Tick(_) => 3,
        }
    }
}

type Key = (u64, u8, u64);

#[derive(Debug, Clone)]
pub struct Session {
    config: SessionConfig,
    pipeline: Pipeline,
    filter: BandPassFilter,
    detector: TapDetector,
    markers: MarkerHistory,
    poses: VecDeque<(u64, DisplayObjectTrack)>,
    fsm: FsmState,
    state: SessionState,
    queue: BTreeMap<Key, Item>,
    next_seq: u64,
    pending_taps: Vec<TapEvent>,
    last_frame: Option<u64>,
    last_output: Option<FrameOutput>,
    scratch: Vec<i16>,
}

impl Session {
    /// Session whose clock and audio stream both start at t = 0.
    pub fn new(config: SessionConfig, palette: Palette) -> Result<Self, SimError> {
        palette.validate()?;
        config.band.validate()?;
        if !(config.tap_threshold > 0.0 && config.tap_threshold <= 1.0) {
            return Err(SimError::Invalid("tap_threshold must be in (0, 1]".into()));
        }
        config
            .pipeline
            .canny
            .validate()
            .map_err(|e| SimError::Invalid(e.to_string()))?;
        Ok(Self {
            pipeline: Pipeline::new(config.pipeline),
            filter: BandPassFilter::new(config.band)?,
            detector: TapDetector::new(config.tap_threshold, config.refractory_ms, 0),
            markers: MarkerHistory::new(HISTORY_MS),
            poses: VecDeque::new(),
            fsm: FsmState::new(),
            state: SessionState::new(palette),
            queue: BTreeMap::new(),
            next_seq: 0,
            pending_taps: Vec::new(),
            last_frame: None,
            last_output: None,
            scratch: Vec::new(),
            config,
        })
    }

    pub fn config(&self) -> &SessionConfig {
        &self.config
    }

    pub fn state(&self) -> &SessionState {
        &self.state
    }

    pub fn fsm(&self) -> &FsmState {
        &self.fsm
    }

    pub fn pipeline(&self) -> &Pipeline {
        &self.pipeline
    }

    pub fn display_object(&self) -> &DisplayObjectTrack {
        self.pipeline.display_object()
    }

    /// Perception result of the latest frame.
    pub fn last_output(&self) -> Option<&FrameOutput> {
        self.last_output.as_ref()
    }

    /// Processes the frame captured at `t` together with the microphone
    /// samples recorded since the previous call.
    pub fn step(
        &mut self,
        frame: &ImageRgb8,
        t: u64,
        audio: &[i16],
    ) -> Result<Vec<SessionEvent>, SimError> {
        if self.last_frame.is_some_and(|last| t <= last) {
            return Err(SimError::Invalid(format!(
                "frame at t={t} ms is not after the previous frame"
            )));
        }
        let out = self.pipeline.process(frame, t);
        self.poses.push_back((t, *self.pipeline.display_object()));
        while self
            .poses
            .get(1)
            .is_some_and(|&(t1, _)| t1 + HISTORY_MS < t)
        {
            self.poses.pop_front();
        }
        if let Some(c) = out.marker_centre {
            self.markers.push(t, c);
        }
        if let Some(m) = out.move_event {
            self.enqueue(m.t, Item::Move(m));
        }
        self.last_output = Some(out);
        self.last_frame = Some(t);
        self.feed_audio(audio);
        self.fuse_ready(false);
        self.enqueue(t, Item::Tick(t));
        let mut events = Vec::new();
        self.release(self.horizon(), &mut events)?;
        Ok(events)
    }

    /// Feeds the trailing audio, settles every pending tap and drains the queue.
    pub fn finish(&mut self, trailing_audio: &[i16]) -> Result<Vec<SessionEvent>, SimError> {
        self.feed_audio(trailing_audio);
        if let Some(tap) = self.detector.finish() {
            self.enqueue(tap.t, Item::Tap(tap));
            self.pending_taps.push(tap);
        }
        self.fuse_ready(true);
        let mut events = Vec::new();
        self.release((u64::MAX, u8::MAX), &mut events)?;
        Ok(events)
    }

    fn enqueue(&mut self, t: u64, item: Item) {
        self.queue.insert((t, item.rank(), self.next_seq), item);
        self.next_seq += 1;
    }

    fn feed_audio(&mut self, audio: &[i16]) {
        let mut filtered = std::mem::take(&mut self.scratch);
        filtered.clear();
        self.filter.process(audio, &mut filtered);
        for tap in self.detector.push(&filtered) {
            self.enqueue(tap.t, Item::Tap(tap));
            self.pending_taps.push(tap);
        }
        self.scratch = filtered;
    }

    fn pose_at(&self, t: u64) -> DisplayObjectTrack {
        let i = self.poses.partition_point(|&(ts, _)| ts <= t);
        let j = i.saturating_sub(1);
        self.poses.get(j).map(|&(_, d)| d).unwrap_or_default()
    }

    fn fuse_ready(&mut self, force: bool) {
        let newest_marker = self.markers.samples().last().map(|&(ts, _)| ts);
        let now = self.last_frame;
        let (ready, waiting): (Vec<TapEvent>, Vec<TapEvent>) =
            self.pending_taps.drain(..).partition(|tap| {
                force
                    || newest_marker.is_some_and(|ts| ts >= tap.t)
                    || now.is_some_and(|now| now >= tap.t + ASSOCIATION_WINDOW_MS)
            });
        self.pending_taps = waiting;
        for tap in ready {
            let seen_at = self.markers.nearest(tap.t).map_or(tap.t, |(ts, _)| ts);
            if let Some(touch) = fuse(&tap, &self.markers, &self.pose_at(seen_at)) {
                self.enqueue(touch.t, Item::Touch(touch));
            }
        }
    }

    /// Items keyed strictly below this can no longer be preceded by new ones.
    fn horizon(&self) -> (u64, u8) {
        // Audio up to the frame time is in, but a tap stamped exactly then may follow.
        let mut h = (self.last_frame.unwrap_or(0), 1);
        if let Some(t) = self.detector.open_run_time() {
            h = h.min((t, 1));
        }
        for tap in &self.pending_taps {
            h = h.min((tap.t, 2));
        }
        h
    }

    fn release(
        &mut self,
        horizon: (u64, u8),
        events: &mut Vec<SessionEvent>,
    ) -> Result<(), SimError> {
        while let Some(entry) = self.queue.first_entry() {
            let &(t, rank, _) = entry.key();
            if (t, rank) >= horizon {
                break;
            }
            let item = entry.remove();
            self.handle(t, item, events)?;
        }
        Ok(())
    }

    fn handle(
        &mut self,
        t: u64,
        item: Item,
        events: &mut Vec<SessionEvent>,
    ) -> Result<(), SimError> {
        let input = match item {
            Item::Move(m) => {
                events.push((&m).into());
                FsmInput::Move(m)
            }
            Item::Tap(tap) => {
                events.push((&tap).into());
                return Ok(());
            }
            Item::Touch(touch) => FsmInput::Touch(touch),
            Item::Tick(t) => FsmInput::Tick(t),
        };
        let dobj = self.pose_at(t);
        let ctx = FsmContext {
            session: &self.state,
            dobj: &dobj,
            strip: &self.config.strip,
        };
        let gestures = step_fsm(&mut self.fsm, &ctx, &input)?;
        for g in gestures {
            let effects = apply_gesture(&mut self.state, &g)?;
            events.push(SessionEvent::Gesture(g));
            events.extend(effects.into_iter().map(SessionEvent::Effect));
        }
        Ok(())
    }
}
