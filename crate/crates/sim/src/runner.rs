use vip_core::audio::SAMPLE_RATE;
use vip_core::model::SessionState;
use vip_core::vision::ImageRgb8;

use crate::audio::AudioSynth;
use crate::engine::Session;
use crate::error::SimError;
use crate::events::SessionEvent;
use crate::render::render_world;
use crate::scenario::Scenario;
use crate::world::WorldState;

const SAMPLES_PER_MS: u64 = SAMPLE_RATE as u64 / 1000;

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioRun {
    pub events: Vec<SessionEvent>,
    pub state: SessionState,
    pub frames: usize,
}

/// Capture times of the frames, `k * 1000 / frame_rate` ms rounded down.
pub fn frame_times(w: &WorldState) -> impl Iterator<Item = u64> + '_ {
    (0u64..)
        .map(|k| k * 1000 / w.frame_rate as u64)
        .take_while(|&t| t < w.duration_ms)
}

pub fn run_scenario(sc: &Scenario) -> Result<ScenarioRun, SimError> {
    run_scenario_with(sc, |_, _, _, _| Ok(()))
}

/// Runs the scenario, calling `observe(index, t, frame, session)` after every frame.
pub fn run_scenario_with<F>(sc: &Scenario, mut observe: F) -> Result<ScenarioRun, SimError>
where
    F: FnMut(usize, u64, &ImageRgb8, &Session) -> Result<(), SimError>,
{
    sc.validate()?;
    let w = &sc.world;
    let mut session = Session::new(sc.session, sc.palette.clone())?;
    let mut synth = AudioSynth::new(w.seed, w.noise.audio_rms);
    let mut events = Vec::new();
    let mut frames = 0;
    for t in frame_times(w) {
        let frame = render_world(w, t)?;
        let audio = synth.render(&w.taps, (t * SAMPLES_PER_MS - synth.position()) as usize);
        events.extend(session.step(&frame, t, &audio)?);
        observe(frames, t, &frame, &session)?;
        frames += 1;
    }
    let tail = synth.render(
        &w.taps,
        (w.duration_ms * SAMPLES_PER_MS - synth.position()) as usize,
    );
    events.extend(session.finish(&tail)?);
    Ok(ScenarioRun {
        events,
        state: session.state().clone(),
        frames,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use vip_core::model::Palette;

    #[test]
    fn frame_clock() {
        let mut w = WorldState::new(200);
        assert_eq!(
            frame_times(&w).collect::<Vec<_>>(),
            [0, 33, 66, 100, 133, 166]
        );
        w.frame_rate = 10;
        assert_eq!(frame_times(&w).collect::<Vec<_>>(), [0, 100]);
    }

    #[test]
    fn empty_scenario_has_no_events() {
        let run = run_scenario(&Scenario::new(WorldState::new(0))).unwrap();
        assert!(run.events.is_empty());
        assert_eq!(run.frames, 0);
        assert_eq!(run.state, SessionState::new(Palette::standard()));
    }

    #[test]
    fn static_world_is_quiet() {
        let run = run_scenario(&Scenario::new(WorldState::new(1000))).unwrap();
        assert_eq!(run.frames, 30);
        assert!(run.events.is_empty());
    }
}
