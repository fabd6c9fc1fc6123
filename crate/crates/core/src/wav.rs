//! Minimal RIFF/WAVE reader and writer for 16-bit little-endian PCM, mono or stereo.

use std::fs;
use std::path::Path;

use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WavAudio {
    pub sample_rate: u32,
    /// One vector per channel, equal lengths.
    pub channels: Vec<Vec<i16>>,
}

impl WavAudio {
    pub fn n_channels(&self) -> usize {
        self.channels.len()
    }

    pub fn n_samples(&self) -> usize {
        self.channels.first().map_or(0, Vec::len)
    }

    /// Channel `i` scaled to `[-1, 1)`.
    pub fn channel_f64(&self, i: usize) -> Option<Vec<f64>> {
        self.channels
            .get(i)
            .map(|c| c.iter().map(|&s| s as f64 / 32768.0).collect())
    }

    /// Quantises float channels (clipped to `[-1, 1]`) to 16-bit.
    pub fn from_f64(sample_rate: u32, channels: &[Vec<f64>]) -> Self {
        let q = |v: f64| (v.clamp(-1.0, 1.0) * 32767.0).round() as i16;
        Self {
            sample_rate,
            channels: channels.iter().map(|c| c.iter().map(|&v| q(v)).collect()).collect(),
        }
    }
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

pub fn parse_wav(bytes: &[u8]) -> Result<WavAudio> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(Error::Wav("missing RIFF/WAVE header".into()));
    }
    let mut pos = 12;
    let mut format: Option<(u16, u16, u32, u16)> = None;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = u32_at(bytes, pos + 4) as usize;
        let body = pos + 8;
        if id == b"fmt " {
            if size < 16 || body + 16 > bytes.len() {
                return Err(Error::Wav("truncated fmt chunk".into()));
            }
            format = Some((
                u16_at(bytes, body),
                u16_at(bytes, body + 2),
                u32_at(bytes, body + 4),
                u16_at(bytes, body + 14),
            ));
        } else if id == b"data" {
            let (tag, channels, rate, bits) = format.ok_or_else(|| Error::Wav("data chunk before fmt chunk".into()))?;
            if tag != 1 {
                return Err(Error::Wav(format!("unsupported encoding (format tag {tag}); only PCM is read")));
            }
            if bits != 16 {
                return Err(Error::Wav(format!("unsupported bit depth {bits}; only 16-bit PCM is read")));
            }
            if !(1..=2).contains(&channels) {
                return Err(Error::Wav(format!("unsupported channel count {channels}")));
            }
            if body + size > bytes.len() {
                return Err(Error::Wav(format!(
                    "truncated data chunk: header says {size} bytes, {} present",
                    bytes.len() - body
                )));
            }
            let nch = channels as usize;
            let frame = 2 * nch;
            let frames = size / frame;
            let mut out = vec![Vec::with_capacity(frames); nch];
            for f in 0..frames {
                for (c, ch) in out.iter_mut().enumerate() {
                    ch.push(u16_at(bytes, body + f * frame + 2 * c) as i16);
                }
            }
            return Ok(WavAudio { sample_rate: rate, channels: out });
        }
        pos = body + size + (size & 1);
    }
    Err(Error::Wav("no data chunk".into()))
}

pub fn encode_wav(audio: &WavAudio) -> Result<Vec<u8>> {
    let nch = audio.n_channels();
    if !(1..=2).contains(&nch) {
        return Err(Error::Wav(format!("unsupported channel count {nch}")));
    }
    let n = audio.n_samples();
    if audio.channels.iter().any(|c| c.len() != n) {
        return Err(Error::Wav("channels have different lengths".into()));
    }
    let data_len = (n * nch * 2) as u32;
    let mut b = Vec::with_capacity(44 + data_len as usize);
    b.extend_from_slice(b"RIFF");
    b.extend_from_slice(&(36 + data_len).to_le_bytes());
    b.extend_from_slice(b"WAVEfmt ");
    b.extend_from_slice(&16u32.to_le_bytes());
    b.extend_from_slice(&1u16.to_le_bytes());
    b.extend_from_slice(&(nch as u16).to_le_bytes());
    b.extend_from_slice(&audio.sample_rate.to_le_bytes());
    b.extend_from_slice(&(audio.sample_rate * nch as u32 * 2).to_le_bytes());
    b.extend_from_slice(&(nch as u16 * 2).to_le_bytes());
    b.extend_from_slice(&16u16.to_le_bytes());
    b.extend_from_slice(b"data");
    b.extend_from_slice(&data_len.to_le_bytes());
    for i in 0..n {
        for ch in &audio.channels {
            b.extend_from_slice(&ch[i].to_le_bytes());
        }
    }
    Ok(b)
}

pub fn read_wav(path: impl AsRef<Path>) -> Result<WavAudio> {
    parse_wav(&fs::read(path)?)
}

pub fn write_wav(path: impl AsRef<Path>, audio: &WavAudio) -> Result<()> {
    fs::write(path, encode_wav(audio)?)?;
    Ok(())
}
