//! Ground-truth synthetic world for the prototyping pipeline.
//!
//! A [`Scenario`] scripts a camera view (display-object pose, fingertip
//! marker) and microphone taps over time. [`render_world`] and
//! [`synth_audio`] turn it into frames and PCM, [`Session`] runs the full
//! perception-to-layout chain on them, and [`server`] exposes the same
//! session loop over a newline-delimited JSON protocol.

mod audio;
mod engine;
mod error;
mod events;
pub mod poses;
pub mod protocol;
mod render;
mod runner;
mod scenario;
pub mod server;
mod world;

pub use audio::{synth_audio, AudioSynth, BURST_FREQ_HZ, BURST_PEAK, BURST_TAU_MS};
pub use engine::{Session, SessionConfig};
pub use error::SimError;
pub use events::{read_jsonl, to_jsonl, SessionEvent};
pub use render::{render_scene, render_world, Scene, BACKGROUND, MARKER_RADIUS, SURFACE};
pub use runner::{frame_times, run_scenario, run_scenario_with, ScenarioRun};
pub use scenario::{Expected, Scenario};
pub use world::{Keyframe, MarkerScript, Noise, WorldState};
