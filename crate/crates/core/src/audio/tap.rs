//! Threshold tap detection with a refractory period.
//!
//! Consecutive samples at or above the threshold form a run; each run yields
//! its loudest sample as a tap unless the run starts within the refractory
//! period of the previous tap.

use serde::{Deserialize, Serialize};

use super::{normalized, sample_time, AudioBuffer};

pub const DEFAULT_THRESHOLD: f64 = 0.25;
pub const DEFAULT_REFRACTORY_MS: u64 = 100;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TapEvent {
    pub t: u64,
    pub peak: f64,
}

/// Streaming detector; feed consecutive chunks with [`TapDetector::push`].
#[derive(Debug, Clone)]
pub struct TapDetector {
    threshold: f64,
    refractory_ms: u64,
    start_t: u64,
    consumed: u64,
    last_tap: Option<u64>,
    // (peak amplitude, peak sample index) of the run in progress
    run: Option<(f64, u64)>,
    run_suppressed: bool,
}

impl TapDetector {
    pub fn new(threshold: f64, refractory_ms: u64, start_t: u64) -> Self {
        Self {
            threshold,
            refractory_ms,
            start_t,
            consumed: 0,
            last_tap: None,
            run: None,
            run_suppressed: false,
        }
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Time of the loudest sample so far in a run that has not closed yet.
    /// A tap from that run, if any, is stamped no earlier than this.
    pub fn open_run_time(&self) -> Option<u64> {
        match self.run {
            Some((_, idx)) if !self.run_suppressed => Some(sample_time(self.start_t, idx)),
            _ => None,
        }
    }

    fn close_run(&mut self) -> Option<TapEvent> {
        let (peak, idx) = self.run.take()?;
        if self.run_suppressed {
            return None;
        }
        let t = sample_time(self.start_t, idx);
        self.last_tap = Some(t);
        Some(TapEvent { t, peak })
    }

    pub fn push(&mut self, samples: &[i16]) -> Vec<TapEvent> {
        let mut out = Vec::new();
        for &s in samples {
            let idx = self.consumed;
            self.consumed += 1;
            let a = normalized(s);
            if a >= self.threshold {
                match &mut self.run {
                    Some((peak, at)) => {
                        if a > *peak {
                            *peak = a;
                            *at = idx;
                        }
                    }
                    None => {
                        let t = sample_time(self.start_t, idx);
                        self.run_suppressed = self
                            .last_tap
                            .is_some_and(|last| t < last + self.refractory_ms);
                        self.run = Some((a, idx));
                    }
                }
            } else if let Some(tap) = self.close_run() {
                out.push(tap);
            }
        }
        out
    }

    /// Closes a run still open at the end of the stream.
    pub fn finish(&mut self) -> Option<TapEvent> {
        self.close_run()
    }
}

/// Detects taps in an already band-passed buffer.
pub fn detect_taps(buf: &AudioBuffer, threshold: f64, refractory_ms: u64) -> Vec<TapEvent> {
    let mut d = TapDetector::new(threshold, refractory_ms, buf.start_t);
    let mut taps = d.push(&buf.samples);
    taps.extend(d.finish());
    taps
}
