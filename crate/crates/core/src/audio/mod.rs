//! Surface-microphone tap sensing: band-pass filtering and thresholded onset
//! detection on 16 kHz mono PCM16.

mod filter;
mod tap;
mod wav;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use filter::{band_pass, BandPassFilter, BandPassSpec};
pub use tap::{detect_taps, TapDetector, TapEvent, DEFAULT_REFRACTORY_MS, DEFAULT_THRESHOLD};
pub use wav::{read_wav, write_wav};

pub const SAMPLE_RATE: u32 = 16_000;

#[derive(Debug, Error)]
pub enum AudioError {
    #[error("invalid band-pass spec: {0}")]
    InvalidSpec(&'static str),
    #[error("unsupported sample rate {0} Hz (expected 16000)")]
    SampleRate(u32),
    #[error("unsupported WAV format: {0}")]
    Format(&'static str),
    #[error("wav: {0}")]
    Wav(#[from] hound::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AudioBuffer {
    pub sample_rate: u32,
    pub samples: Vec<i16>,
    /// Time of the first sample, ms.
    pub start_t: u64,
}

impl AudioBuffer {
    pub fn new(samples: Vec<i16>, start_t: u64) -> Self {
        Self {
            sample_rate: SAMPLE_RATE,
            samples,
            start_t,
        }
    }

    pub fn duration_ms(&self) -> u64 {
        self.samples.len() as u64 * 1000 / self.sample_rate as u64
    }
}

/// Millisecond timestamp of sample `index` in a stream starting at `start_t`.
pub fn sample_time(start_t: u64, index: u64) -> u64 {
    start_t + (index * 1000 + SAMPLE_RATE as u64 / 2) / SAMPLE_RATE as u64
}

/// Normalised amplitude of a PCM16 sample.
pub fn normalized(s: i16) -> f64 {
    (s as f64).abs() / 32768.0
}
