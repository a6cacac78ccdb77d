use crate::error::{OgsError, Result};
use std::path::Path;

const FULL_SCALE: f64 = 32768.0;

fn map_err(e: hound::Error) -> OgsError {
    match e {
        hound::Error::IoError(e) => OgsError::Io(e.to_string()),
        hound::Error::FormatError(m) => OgsError::UnsupportedFormat(format!("corrupt header: {m}")),
        other => OgsError::UnsupportedFormat(other.to_string()),
    }
}

/// Reads 16-bit PCM audio scaled to `[-1, 1)`. Multi-channel files are
/// averaged down to mono.
pub fn read_wav(path: impl AsRef<Path>) -> Result<(Vec<f64>, u32)> {
    let mut reader = hound::WavReader::open(path.as_ref()).map_err(map_err)?;
    let spec = reader.spec();
    if spec.sample_format != hound::SampleFormat::Int || spec.bits_per_sample != 16 {
        return Err(OgsError::UnsupportedFormat(format!(
            "{:?} {}-bit audio; only 16-bit PCM is supported",
            spec.sample_format, spec.bits_per_sample
        )));
    }
    let raw = reader
        .samples::<i16>()
        .collect::<std::result::Result<Vec<_>, _>>()
        .map_err(map_err)?;
    let channels = spec.channels as usize;
    if channels > 1 {
        log::warn!(
            "{} has {channels} channels; averaging to mono",
            path.as_ref().display()
        );
    }
    let samples = raw
        .chunks(channels)
        .map(|frame| frame.iter().map(|&s| s as f64).sum::<f64>() / (channels as f64 * FULL_SCALE))
        .collect();
    Ok((samples, spec.sample_rate))
}

/// Writes mono 16-bit PCM, clamping to full scale and truncating.
pub fn write_wav(path: impl AsRef<Path>, signal: &[f64], sample_rate: u32) -> Result<()> {
    let spec = hound::WavSpec {
        channels: 1,
        sample_rate,
        bits_per_sample: 16,
        sample_format: hound::SampleFormat::Int,
    };
    let mut writer = hound::WavWriter::create(path, spec).map_err(map_err)?;
    for &v in signal {
        let s = (v * FULL_SCALE).clamp(-FULL_SCALE, FULL_SCALE - 1.0) as i16;
        writer.write_sample(s).map_err(map_err)?;
    }
    writer.finalize().map_err(map_err)
}
