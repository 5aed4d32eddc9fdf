//! Welch power spectral density estimation.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::Complex;

use crate::error::{Error, Result};

/// Welch estimator parameters. A Hann window is always used.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct WelchConfig {
    /// Maximum segment length; shorter signals use a single segment of their own length.
    pub segment_len: usize,
    /// Fraction of a segment shared with the next one, in `[0, 1)`.
    pub overlap: f64,
}

impl Default for WelchConfig {
    fn default() -> Self {
        Self {
            segment_len: 1024,
            overlap: 0.5,
        }
    }
}

impl WelchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.segment_len < 2 {
            return Err(Error::InvalidParameter("PSD segment length must be at least 2".into()));
        }
        if !(0.0..1.0).contains(&self.overlap) {
            return Err(Error::InvalidParameter("PSD overlap must lie in [0, 1)".into()));
        }
        Ok(())
    }
}

/// One-sided PSD estimate in power per Hz.
#[derive(Debug, Clone, PartialEq)]
pub struct Psd {
    /// Bin spacing in Hz.
    pub resolution: f64,
    pub density: Vec<f64>,
}

impl Psd {
    pub fn frequency(&self, bin: usize) -> f64 {
        bin as f64 * self.resolution
    }

    /// Integral of the density over frequency (rectangle rule).
    pub fn total_power(&self) -> f64 {
        self.density.iter().sum::<f64>() * self.resolution
    }

    pub fn mean(&self) -> f64 {
        self.density.iter().sum::<f64>() / self.density.len() as f64
    }
}

/// Periodic Hann window of length `n`.
pub fn hann(n: usize) -> Vec<f64> {
    (0..n)
        .map(|i| 0.5 - 0.5 * libm::cos(2.0 * PI * i as f64 / n as f64))
        .collect()
}

/// In-place forward DFT. Radix-2 for power-of-two lengths, direct summation otherwise.
pub fn dft(buf: &mut [Complex<f64>]) {
    let n = buf.len();
    if n <= 1 {
        return;
    }
    if n.is_power_of_two() {
        radix2(buf);
    } else {
        let input = buf.to_vec();
        for (k, out) in buf.iter_mut().enumerate() {
            let mut acc = Complex::new(0.0, 0.0);
            for (t, x) in input.iter().enumerate() {
                // reduce the phase index first to keep the angle small
                let idx = (k * t) % n;
                let angle = -2.0 * PI * idx as f64 / n as f64;
                acc += x * Complex::new(libm::cos(angle), libm::sin(angle));
            }
            *out = acc;
        }
    }
}

fn radix2(buf: &mut [Complex<f64>]) {
    let n = buf.len();
    let bits = n.trailing_zeros();
    for i in 0..n {
        let j = i.reverse_bits() >> (usize::BITS - bits);
        if j > i {
            buf.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let step = -2.0 * PI / len as f64;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                let angle = step * k as f64;
                let w = Complex::new(libm::cos(angle), libm::sin(angle));
                let a = buf[start + k];
                let b = buf[start + k + half] * w;
                buf[start + k] = a + b;
                buf[start + k + half] = a - b;
            }
        }
        len <<= 1;
    }
}

/// Welch PSD of `samples` at `sample_rate` Hz.
///
/// Segments of `min(segment_len, N)` samples are Hann-windowed without
/// detrending, their periodograms are averaged and folded to one side.
pub fn welch(samples: &[f64], sample_rate: f64, config: &WelchConfig) -> Result<Psd> {
    config.validate()?;
    if samples.len() < 2 {
        return Err(Error::FrameTooShort {
            len: samples.len(),
            min: 2,
        });
    }
    let seg = config.segment_len.min(samples.len());
    let overlap = libm::floor(config.overlap * seg as f64) as usize;
    let step = (seg - overlap).max(1);
    let window = hann(seg);
    let window_power: f64 = window.iter().map(|w| w * w).sum();
    let bins = seg / 2 + 1;

    let mut acc = vec![0.0; bins];
    let mut buf = vec![Complex::new(0.0, 0.0); seg];
    let mut segments = 0usize;
    let mut start = 0;
    while start + seg <= samples.len() {
        for ((slot, x), w) in buf.iter_mut().zip(&samples[start..start + seg]).zip(&window) {
            *slot = Complex::new(x * w, 0.0);
        }
        dft(&mut buf);
        for (a, c) in acc.iter_mut().zip(&buf) {
            *a += c.norm_sqr();
        }
        segments += 1;
        start += step;
    }

    let scale = 1.0 / (sample_rate * window_power * segments as f64);
    let nyquist = if seg % 2 == 0 { Some(bins - 1) } else { None };
    let density = acc
        .iter()
        .enumerate()
        .map(|(k, p)| {
            let fold = if k == 0 || Some(k) == nyquist { 1.0 } else { 2.0 };
            p * scale * fold
        })
        .collect();
    Ok(Psd {
        resolution: sample_rate / seg as f64,
        density,
    })
}
