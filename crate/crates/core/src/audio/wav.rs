use std::io::{Cursor, Read};

use super::{AudioBuffer, AudioError, SAMPLE_RATE};

/// Reads a mono PCM16 16 kHz WAV; the buffer starts at t = 0.
pub fn read_wav<R: Read>(reader: R) -> Result<AudioBuffer, AudioError> {
    let mut r = hound::WavReader::new(reader)?;
    let spec = r.spec();
    if spec.sample_rate != SAMPLE_RATE {
        return Err(AudioError::SampleRate(spec.sample_rate));
    }
    if spec.channels != 1 {
        return Err(AudioError::Format("expected mono"));
    }
    if spec.bits_per_sample != 16 || spec.sample_format != hound::SampleFormat::Int {
        return Err(AudioError::Format("expected 16-bit integer PCM"));
    }
    let samples = r.samples::<i16>().collect::<Result<Vec<_>, _>>()?;
    Ok(AudioBuffer::new(samples, 0))
}

pub fn write_wav(buf: &AudioBuffer) -> Result<Vec<u8>, AudioError> {
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate: buf.sample_rate,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let mut bytes = Vec::new();
    let mut w = hound::WavWriter::new(Cursor::new(&mut bytes), spec)?;
    for &s in &buf.samples {
        w.write_sample(s)?;
    }
    w.finalize()?;
    Ok(bytes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        let buf = AudioBuffer::new(vec![0, 1, -1, i16::MAX, i16::MIN, 1234], 0);
        let bytes = write_wav(&buf).unwrap();
        assert_eq!(&bytes[..4], b"RIFF");
        assert_eq!(bytes.len(), 44 + 12);
        assert_eq!(read_wav(bytes.as_slice()).unwrap(), buf);
    }

    #[test]
    fn wrong_rate_is_rejected() {
        let mut buf = AudioBuffer::new(vec![0; 4], 0);
        buf.sample_rate = 44_100;
        let bytes = write_wav(&buf).unwrap();
        assert!(matches!(
            read_wav(bytes.as_slice()),
            Err(AudioError::SampleRate(44_100))
        ));
    }
}
