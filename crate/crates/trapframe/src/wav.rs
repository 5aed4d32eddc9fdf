//! RIFF/WAVE decoding and encoding for integer PCM (8/16/24/32-bit) and
//! 32-bit IEEE float.

use std::fs;
use std::path::Path;

use trapframe_core::AudioClip;

const TAG_PCM: u16 = 0x0001;
const TAG_FLOAT: u16 = 0x0003;
const TAG_EXTENSIBLE: u16 = 0xFFFE;

#[derive(Debug, thiserror::Error)]
pub enum WavError {
    #[error("not a RIFF/WAVE stream")]
    NotRiff,
    #[error("unsupported encoding: format tag {tag:#06x}, {bits} bits per sample")]
    UnsupportedEncoding { tag: u16, bits: u16 },
    #[error("data chunk declares {declared} bytes but only {available} are present")]
    TruncatedData { declared: usize, available: usize },
    #[error("stream holds no samples")]
    EmptyData,
    #[error("malformed stream: {0}")]
    Malformed(&'static str),
    #[error("invalid clip: {0}")]
    Clip(#[from] trapframe_core::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// On-disk sample encodings.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SampleFormat {
    U8,
    I16,
    I24,
    I32,
    F32,
}

impl SampleFormat {
    pub fn bits(self) -> u16 {
        match self {
            SampleFormat::U8 => 8,
            SampleFormat::I16 => 16,
            SampleFormat::I24 => 24,
            SampleFormat::I32 | SampleFormat::F32 => 32,
        }
    }

    fn tag(self) -> u16 {
        if self == SampleFormat::F32 {
            TAG_FLOAT
        } else {
            TAG_PCM
        }
    }

    fn from_header(tag: u16, bits: u16) -> Result<Self, WavError> {
        match (tag, bits) {
            (TAG_PCM, 8) => Ok(SampleFormat::U8),
            (TAG_PCM, 16) => Ok(SampleFormat::I16),
            (TAG_PCM, 24) => Ok(SampleFormat::I24),
            (TAG_PCM, 32) => Ok(SampleFormat::I32),
            (TAG_FLOAT, 32) => Ok(SampleFormat::F32),
            _ => Err(WavError::UnsupportedEncoding { tag, bits }),
        }
    }
}

fn u16_at(b: &[u8], at: usize) -> u16 {
    u16::from_le_bytes([b[at], b[at + 1]])
}

fn u32_at(b: &[u8], at: usize) -> u32 {
    u32::from_le_bytes([b[at], b[at + 1], b[at + 2], b[at + 3]])
}

struct Format {
    encoding: SampleFormat,
    channels: usize,
    sample_rate: u32,
    block_align: usize,
}

fn parse_fmt(body: &[u8]) -> Result<Format, WavError> {
    if body.len() < 16 {
        return Err(WavError::Malformed("fmt chunk shorter than 16 bytes"));
    }
    let mut tag = u16_at(body, 0);
    let channels = u16_at(body, 2) as usize;
    let sample_rate = u32_at(body, 4);
    let block_align = u16_at(body, 12) as usize;
    let bits = u16_at(body, 14);
    if tag == TAG_EXTENSIBLE {
        if body.len() < 40 {
            return Err(WavError::Malformed("extensible fmt chunk shorter than 40 bytes"));
        }
        // first two bytes of the sub-format GUID carry the real tag
        tag = u16_at(body, 24);
        let valid_bits = u16_at(body, 18);
        if valid_bits != 0 && valid_bits != bits {
            return Err(WavError::UnsupportedEncoding { tag, bits: valid_bits });
        }
    }
    let encoding = SampleFormat::from_header(tag, bits)?;
    if channels == 0 {
        return Err(WavError::Malformed("zero channels"));
    }
    if sample_rate == 0 {
        return Err(WavError::Malformed("zero sample rate"));
    }
    if block_align != channels * (bits as usize / 8) {
        return Err(WavError::Malformed("block align disagrees with channels and bit depth"));
    }
    Ok(Format {
        encoding,
        channels,
        sample_rate,
        block_align,
    })
}

fn decode_sample(encoding: SampleFormat, b: &[u8]) -> Result<f64, WavError> {
    Ok(match encoding {
        SampleFormat::U8 => (b[0] as f64 - 128.0) / 128.0,
        SampleFormat::I16 => i16::from_le_bytes([b[0], b[1]]) as f64 / 32768.0,
        SampleFormat::I24 => {
            let v = i32::from_le_bytes([0, b[0], b[1], b[2]]) >> 8;
            v as f64 / 8_388_608.0
        }
        SampleFormat::I32 => i32::from_le_bytes([b[0], b[1], b[2], b[3]]) as f64 / 2_147_483_648.0,
        SampleFormat::F32 => {
            let v = f32::from_le_bytes([b[0], b[1], b[2], b[3]]);
            if !v.is_finite() {
                return Err(WavError::Malformed("non-finite float sample"));
            }
            (v as f64).clamp(-1.0, 1.0)
        }
    })
}

/// Decodes a complete WAV byte stream. Integer samples are divided by
/// `2^(bits-1)` (8-bit data is unsigned and recentred first); float samples
/// are clamped to [-1, 1].
pub fn decode_wav(bytes: &[u8]) -> Result<AudioClip, WavError> {
    if bytes.len() < 12 || &bytes[0..4] != b"RIFF" || &bytes[8..12] != b"WAVE" {
        return Err(WavError::NotRiff);
    }
    let mut pos = 12;
    let mut format = None;
    let mut data = None;
    while pos + 8 <= bytes.len() {
        let id = &bytes[pos..pos + 4];
        let size = u32_at(bytes, pos + 4) as usize;
        let start = pos + 8;
        let available = bytes.len() - start;
        match id {
            b"fmt " => {
                if size > available {
                    return Err(WavError::Malformed("fmt chunk runs past end of stream"));
                }
                format = Some(parse_fmt(&bytes[start..start + size])?);
            }
            b"data" => {
                if size > available {
                    return Err(WavError::TruncatedData {
                        declared: size,
                        available,
                    });
                }
                data = Some(&bytes[start..start + size]);
                break;
            }
            _ => {}
        }
        pos = start.saturating_add(size).saturating_add(size & 1);
    }
    let format = format.ok_or(WavError::Malformed("missing fmt chunk"))?;
    let data = data.ok_or(WavError::Malformed("missing data chunk"))?;
    let frames = data.len() / format.block_align;
    if frames == 0 {
        return Err(WavError::EmptyData);
    }
    let width = format.block_align / format.channels;
    let mut channels = vec![Vec::with_capacity(frames); format.channels];
    for frame in data.chunks_exact(format.block_align) {
        for (c, raw) in frame.chunks_exact(width).enumerate() {
            channels[c].push(decode_sample(format.encoding, raw)?);
        }
    }
    Ok(AudioClip::new(format.sample_rate, channels)?)
}

pub fn read_wav(path: &Path) -> Result<AudioClip, WavError> {
    decode_wav(&fs::read(path)?)
}

fn quantize(v: f64, scale: f64, lo: f64, hi: f64) -> f64 {
    (v * scale).round().clamp(lo, hi)
}

/// Encodes a clip with a canonical 44-byte header. Integer formats round to
/// the nearest code, so decoding then re-encoding integer data is bit-exact.
pub fn encode_wav(clip: &AudioClip, encoding: SampleFormat) -> Vec<u8> {
    let channels = clip.channel_count();
    let width = encoding.bits() as usize / 8;
    let block_align = channels * width;
    let data_len = clip.len() * block_align;
    let mut out = Vec::with_capacity(44 + data_len + 1);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&((36 + data_len + (data_len & 1)) as u32).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&encoding.tag().to_le_bytes());
    out.extend_from_slice(&(channels as u16).to_le_bytes());
    out.extend_from_slice(&clip.sample_rate().to_le_bytes());
    out.extend_from_slice(&(clip.sample_rate() * block_align as u32).to_le_bytes());
    out.extend_from_slice(&(block_align as u16).to_le_bytes());
    out.extend_from_slice(&encoding.bits().to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&(data_len as u32).to_le_bytes());
    for i in 0..clip.len() {
        for c in 0..channels {
            let v = clip.channel(c)[i];
            match encoding {
                SampleFormat::U8 => out.push((quantize(v, 128.0, -128.0, 127.0) + 128.0) as u8),
                SampleFormat::I16 => {
                    out.extend_from_slice(&(quantize(v, 32768.0, -32768.0, 32767.0) as i16).to_le_bytes())
                }
                SampleFormat::I24 => {
                    let q = quantize(v, 8_388_608.0, -8_388_608.0, 8_388_607.0) as i32;
                    out.extend_from_slice(&q.to_le_bytes()[..3]);
                }
                SampleFormat::I32 => out.extend_from_slice(
                    &(quantize(v, 2_147_483_648.0, -2_147_483_648.0, 2_147_483_647.0) as i32).to_le_bytes(),
                ),
                SampleFormat::F32 => out.extend_from_slice(&(v as f32).to_le_bytes()),
            }
        }
    }
    if data_len & 1 == 1 {
        out.push(0);
    }
    out
}

pub fn write_wav(path: &Path, clip: &AudioClip, encoding: SampleFormat) -> Result<(), WavError> {
    fs::write(path, encode_wav(clip, encoding))?;
    Ok(())
}
