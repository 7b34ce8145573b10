//! Synthetic microphone signal: decaying tone bursts over white noise.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use vip_core::audio::{AudioBuffer, SAMPLE_RATE};

use crate::world::WorldState;

pub const BURST_FREQ_HZ: f64 = 2000.0;
pub const BURST_PEAK: f64 = 0.8;
pub const BURST_TAU_MS: f64 = 15.0;
/// Bursts are cut after this many time constants, below half an LSB.
const BURST_SPAN_TAU: f64 = 12.0;
/// Keeps the audio noise stream apart from the per-frame image noise.
const AUDIO_STREAM: u64 = 0xA0D1_0000_0000_0001;

const SAMPLES_PER_MS: u64 = SAMPLE_RATE as u64 / 1000;

fn burst_len() -> u64 {
    (BURST_SPAN_TAU * BURST_TAU_MS) as u64 * SAMPLES_PER_MS
}

/// Streaming synthesizer; successive [`AudioSynth::render`] calls continue
/// the same signal.
#[derive(Debug, Clone)]
pub struct AudioSynth {
    rng: ChaCha8Rng,
    noise: Option<Normal<f64>>,
    next: u64,
}

impl AudioSynth {
    pub fn new(seed: u64, noise_rms: f64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed ^ AUDIO_STREAM),
            noise: (noise_rms > 0.0)
                .then(|| Normal::new(0.0, noise_rms).expect("finite noise rms")),
            next: 0,
        }
    }

    /// Index of the next sample to be rendered.
    pub fn position(&self) -> u64 {
        self.next
    }

    /// Renders the next `n` samples. `taps` are burst onsets in ms; only those
    /// overlapping the chunk contribute.
    pub fn render(&mut self, taps: &[u64], n: usize) -> Vec<i16> {
        let (from, to) = (self.next, self.next + n as u64);
        let mut buf = vec![0.0f64; n];
        let w = 2.0 * std::f64::consts::PI * BURST_FREQ_HZ / SAMPLE_RATE as f64;
        let decay = 1.0 / (BURST_TAU_MS * SAMPLES_PER_MS as f64);
        for &tap in taps {
            let s0 = tap * SAMPLES_PER_MS;
            let (a, b) = (s0.max(from), (s0 + burst_len()).min(to));
            for i in a..b.max(a) {
                let k = (i - s0) as f64;
                buf[(i - from) as usize] += BURST_PEAK * (-k * decay).exp() * (w * k).sin();
            }
        }
        if let Some(noise) = &self.noise {
            for x in &mut buf {
                *x += noise.sample(&mut self.rng);
            }
        }
        self.next = to;
        buf.iter()
            .map(|x| (x * 32767.0).round().clamp(-32768.0, 32767.0) as i16)
            .collect()
    }
}

/// Whole-scenario microphone track.
pub fn synth_audio(w: &WorldState) -> AudioBuffer {
    let n = (w.duration_ms * SAMPLES_PER_MS) as usize;
    AudioBuffer::new(
        AudioSynth::new(w.seed, w.noise.audio_rms).render(&w.taps, n),
        0,
    )
}
