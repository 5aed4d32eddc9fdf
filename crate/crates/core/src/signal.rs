//! Decoded audio, mono mixdown and the three-frame trapezoidal split.

use alloc::vec::Vec;

use crate::error::{Error, FrameId, Result};

/// Default share of samples assigned to the opening (attack) frame.
pub const DEFAULT_OPENING_FRACTION: f64 = 0.05;
/// Default share of samples assigned to the closing (decay) frame.
pub const DEFAULT_CLOSING_FRACTION: f64 = 0.05;

fn check_samples(samples: &[f64]) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::InvalidAudio("no samples"));
    }
    if samples.iter().any(|s| !(-1.0..=1.0).contains(s)) {
        return Err(Error::InvalidAudio("sample outside [-1, 1]"));
    }
    Ok(())
}

/// Multi-channel PCM audio scaled to `[-1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct AudioClip {
    sample_rate: u32,
    channels: Vec<Vec<f64>>,
}

impl AudioClip {
    /// Builds a clip from per-channel sample sequences.
    pub fn new(sample_rate: u32, channels: Vec<Vec<f64>>) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::InvalidAudio("sample rate must be positive"));
        }
        let first = channels.first().ok_or(Error::InvalidAudio("no channels"))?;
        let len = first.len();
        for ch in &channels {
            if ch.len() != len {
                return Err(Error::InvalidAudio("channels differ in length"));
            }
            check_samples(ch)?;
        }
        Ok(Self {
            sample_rate,
            channels,
        })
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn channel_count(&self) -> usize {
        self.channels.len()
    }

    /// Samples per channel.
    pub fn len(&self) -> usize {
        self.channels[0].len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn channel(&self, index: usize) -> &[f64] {
        &self.channels[index]
    }

    pub fn channels(&self) -> &[Vec<f64>] {
        &self.channels
    }
}

/// A single-channel signal.
#[derive(Debug, Clone, PartialEq)]
pub struct MonoSignal {
    sample_rate: u32,
    samples: Vec<f64>,
}

impl MonoSignal {
    pub fn new(sample_rate: u32, samples: Vec<f64>) -> Result<Self> {
        if sample_rate == 0 {
            return Err(Error::InvalidAudio("sample rate must be positive"));
        }
        check_samples(&samples)?;
        Ok(Self {
            sample_rate,
            samples,
        })
    }

    pub fn sample_rate(&self) -> u32 {
        self.sample_rate
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn into_samples(self) -> Vec<f64> {
        self.samples
    }
}

/// Averages all channels sample by sample. A mono clip is returned unchanged.
pub fn mixdown(clip: &AudioClip) -> MonoSignal {
    let samples = if clip.channel_count() == 1 {
        clip.channel(0).to_vec()
    } else {
        let n = clip.channel_count() as f64;
        (0..clip.len())
            .map(|i| clip.channels.iter().map(|ch| ch[i]).sum::<f64>() / n)
            .collect()
    };
    MonoSignal {
        sample_rate: clip.sample_rate,
        samples,
    }
}

/// The opening, stanzas and closing segments of one signal, borrowed from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameTriple<'a> {
    pub sample_rate: u32,
    pub opening: &'a [f64],
    pub stanzas: &'a [f64],
    pub closing: &'a [f64],
}

impl<'a> FrameTriple<'a> {
    pub fn frame(&self, id: FrameId) -> &'a [f64] {
        match id {
            FrameId::Opening => self.opening,
            FrameId::Stanzas => self.stanzas,
            FrameId::Closing => self.closing,
        }
    }

    pub fn lengths(&self) -> (usize, usize, usize) {
        (self.opening.len(), self.stanzas.len(), self.closing.len())
    }
}

/// Segment lengths `(opening, stanzas, closing)` for a signal of `len` samples.
///
/// Both outer frames take `floor(fraction * len)` samples and the middle frame
/// absorbs the remainder.
pub fn frame_lengths(len: usize, opening: f64, closing: f64) -> Result<(usize, usize, usize)> {
    let valid = opening.is_finite()
        && closing.is_finite()
        && opening > 0.0
        && closing > 0.0
        && opening + closing < 1.0;
    if !valid {
        return Err(Error::BadFractions { opening, closing });
    }
    let n = len as f64;
    let head = libm::floor(opening * n) as usize;
    let tail = libm::floor(closing * n) as usize;
    if head == 0 || tail == 0 || head + tail >= len {
        return Err(Error::TooShort { len });
    }
    Ok((head, len - head - tail, tail))
}

/// Splits a signal into its three trapezoidal frames.
pub fn split_frames(signal: &MonoSignal, opening: f64, closing: f64) -> Result<FrameTriple<'_>> {
    let (head, body, _) = frame_lengths(signal.len(), opening, closing)?;
    let s = signal.samples();
    Ok(FrameTriple {
        sample_rate: signal.sample_rate,
        opening: &s[..head],
        stanzas: &s[head..head + body],
        closing: &s[head + body..],
    })
}
