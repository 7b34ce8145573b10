//! Second-order band-pass biquad.
//!
//! Centre frequency is the geometric mean of the cutoffs and Q is the centre
//! over the bandwidth. The response is normalised to unity gain at the centre,
//! so a wide band (Q well below one) does not attenuate the pass band.

use serde::{Deserialize, Serialize};

use super::{AudioBuffer, AudioError, SAMPLE_RATE};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandPassSpec {
    pub low_hz: f64,
    pub high_hz: f64,
}

impl Default for BandPassSpec {
    fn default() -> Self {
        Self {
            low_hz: 300.0,
            high_hz: 4000.0,
        }
    }
}

impl BandPassSpec {
    pub fn new(low_hz: f64, high_hz: f64) -> Result<Self, AudioError> {
        let s = Self { low_hz, high_hz };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), AudioError> {
        if !(self.low_hz.is_finite() && self.high_hz.is_finite()) {
            return Err(AudioError::InvalidSpec("cutoffs must be finite"));
        }
        if self.low_hz <= 0.0 {
            return Err(AudioError::InvalidSpec("low cutoff must be positive"));
        }
        if self.low_hz >= self.high_hz {
            return Err(AudioError::InvalidSpec(
                "low cutoff must be below high cutoff",
            ));
        }
        if self.high_hz >= SAMPLE_RATE as f64 / 2.0 {
            return Err(AudioError::InvalidSpec("high cutoff must be below Nyquist"));
        }
        Ok(())
    }

    pub fn centre_hz(&self) -> f64 {
        (self.low_hz * self.high_hz).sqrt()
    }

    pub fn q(&self) -> f64 {
        self.centre_hz() / (self.high_hz - self.low_hz)
    }
}

/// Streaming biquad; state carries across [`BandPassFilter::process`] calls.
#[derive(Debug, Clone)]
pub struct BandPassFilter {
    b0: f64,
    b2: f64,
    a1: f64,
    a2: f64,
    z1: f64,
    z2: f64,
}

impl BandPassFilter {
    pub fn new(spec: BandPassSpec) -> Result<Self, AudioError> {
        spec.validate()?;
        let w0 = 2.0 * std::f64::consts::PI * spec.centre_hz() / SAMPLE_RATE as f64;
        let alpha = w0.sin() / (2.0 * spec.q());
        let a0 = 1.0 + alpha;
        Ok(Self {
            b0: alpha / a0,
            b2: -alpha / a0,
            a1: -2.0 * w0.cos() / a0,
            a2: (1.0 - alpha) / a0,
            z1: 0.0,
            z2: 0.0,
        })
    }

    #[inline]
    pub fn step(&mut self, x: f64) -> f64 {
        // Transposed direct form II; b1 is zero for a band-pass.
        let y = self.b0 * x + self.z1;
        self.z1 = -self.a1 * y + self.z2;
        self.z2 = self.b2 * x - self.a2 * y;
        y
    }

    pub fn process(&mut self, input: &[i16], out: &mut Vec<i16>) {
        out.reserve(input.len());
        for &s in input {
            let y = self.step(s as f64).round();
            out.push(y.clamp(i16::MIN as f64, i16::MAX as f64) as i16);
        }
    }

    /// Magnitude response at `hz`.
    pub fn gain_at(&self, hz: f64) -> f64 {
        let w = 2.0 * std::f64::consts::PI * hz / SAMPLE_RATE as f64;
        let (c1, s1, c2, s2) = (w.cos(), w.sin(), (2.0 * w).cos(), (2.0 * w).sin());
        let num = ((self.b0 + self.b2 * c2).powi(2) + (self.b2 * s2).powi(2)).sqrt();
        let den = ((1.0 + self.a1 * c1 + self.a2 * c2).powi(2)
            + (self.a1 * s1 + self.a2 * s2).powi(2))
        .sqrt();
        num / den
    }
}

/// Filters a whole buffer from rest.
pub fn band_pass(buf: &AudioBuffer, spec: BandPassSpec) -> Result<AudioBuffer, AudioError> {
    let mut f = BandPassFilter::new(spec)?;
    let mut samples = Vec::new();
    f.process(&buf.samples, &mut samples);
    Ok(AudioBuffer {
        sample_rate: buf.sample_rate,
        samples,
        start_t: buf.start_t,
    })
}
