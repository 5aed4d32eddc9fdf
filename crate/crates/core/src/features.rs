//! The eight per-frame statistics and the 24-value frame vector built from them.
//!
//! Moments are population (1/N) moments computed in two passes: the mean
//! first, then powers of the centred samples. Skewness, kurtosis,
//! hyper-skewness and hyper-flatness are the 3rd to 6th standardized central
//! moments.

use crate::error::{Error, FrameId, Result};
use crate::signal::{FrameTriple, MonoSignal};
use crate::spectral::{self, WelchConfig};

/// Number of statistics computed on each frame.
pub const STATISTICS: usize = 8;
/// Length of the frame-based feature vector.
pub const FRAME_FEATURES: usize = 3 * STATISTICS;

/// Names of the eight statistics, in vector order.
pub const STATISTIC_NAMES: [&str; STATISTICS] = [
    "Mean",
    "Variance",
    "Skewness",
    "Kurtosis",
    "Hyper-skewness",
    "Hyper-flatness",
    "Fano-Factor",
    "PSD",
];

/// Names of the 24 frame features: statistic-major, then frame I/II/III.
pub const FEATURE_NAMES: [&str; FRAME_FEATURES] = [
    "Mean-I",
    "Mean-II",
    "Mean-III",
    "Variance-I",
    "Variance-II",
    "Variance-III",
    "Skewness-I",
    "Skewness-II",
    "Skewness-III",
    "Kurtosis-I",
    "Kurtosis-II",
    "Kurtosis-III",
    "Hyper-skewness-I",
    "Hyper-skewness-II",
    "Hyper-skewness-III",
    "Hyper-flatness-I",
    "Hyper-flatness-II",
    "Hyper-flatness-III",
    "Fano-Factor-I",
    "Fano-Factor-II",
    "Fano-Factor-III",
    "PSD-I",
    "PSD-II",
    "PSD-III",
];

/// Guard applied to the Fano factor denominator.
pub const FANO_EPSILON: f64 = 1e-12;

/// Standard deviations below this fraction of the largest magnitude count as zero.
const DEGENERATE_RELATIVE_SIGMA: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FeatureConfig {
    /// Shortest frame accepted by [`extract_frame_features`].
    pub min_frame_len: usize,
    pub welch: WelchConfig,
}

impl Default for FeatureConfig {
    fn default() -> Self {
        Self {
            min_frame_len: 8,
            welch: WelchConfig::default(),
        }
    }
}

/// Population central moments of orders 2 through 6.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CentralMoments {
    pub len: usize,
    pub mean: f64,
    /// `central[k]` is the population central moment of order `k` (`central[0] = 1`, `central[1] = 0`).
    pub central: [f64; 7],
    /// Whether every sample is (numerically) the same value.
    pub constant: bool,
}

impl CentralMoments {
    pub fn compute(samples: &[f64]) -> Result<Self> {
        if samples.len() < 2 {
            return Err(Error::FrameTooShort {
                len: samples.len(),
                min: 2,
            });
        }
        let n = samples.len() as f64;
        let (lo, hi) = samples
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| {
                (lo.min(x), hi.max(x))
            });
        if lo == hi {
            let mut central = [0.0; 7];
            central[0] = 1.0;
            return Ok(Self {
                len: samples.len(),
                mean: lo,
                central,
                constant: true,
            });
        }

        let mut mean = samples.iter().sum::<f64>() / n;
        // one correction step removes most of the rounding left in the first sum
        mean += samples.iter().map(|x| x - mean).sum::<f64>() / n;

        let mut sums = [0.0f64; 7];
        for &x in samples {
            let d = x - mean;
            let d2 = d * d;
            let d3 = d2 * d;
            sums[2] += d2;
            sums[3] += d3;
            sums[4] += d2 * d2;
            sums[5] += d3 * d2;
            sums[6] += d3 * d3;
        }
        let mut central = [0.0; 7];
        central[0] = 1.0;
        for k in 2..7 {
            central[k] = sums[k] / n;
        }
        let scale = lo.abs().max(hi.abs());
        let sigma = libm::sqrt(central[2]);
        Ok(Self {
            len: samples.len(),
            mean,
            central,
            constant: sigma <= DEGENERATE_RELATIVE_SIGMA * scale,
        })
    }

    pub fn variance(&self) -> f64 {
        self.central[2]
    }

    /// `m_k / sigma^k` for `3 <= k <= 6`.
    pub fn standardized(&self, k: usize) -> Result<f64> {
        assert!((3..=6).contains(&k), "standardized order out of range");
        if self.constant {
            return Err(Error::DegenerateFrame);
        }
        let sigma = libm::sqrt(self.central[2]);
        Ok(self.central[k] / libm::pow(sigma, k as f64))
    }
}

/// Mean (k = 1), population variance (k = 2) or k-th standardized central moment (k >= 3).
pub fn standardized_moment(samples: &[f64], k: u32) -> Result<f64> {
    if k == 0 {
        return Err(Error::InvalidParameter("moment order must be at least 1".into()));
    }
    let m = CentralMoments::compute(samples)?;
    match k {
        1 => Ok(m.mean),
        2 => Ok(m.variance()),
        3..=6 => m.standardized(k as usize),
        _ => {
            if m.constant {
                return Err(Error::DegenerateFrame);
            }
            let n = samples.len() as f64;
            let mk = samples
                .iter()
                .map(|x| libm::pow(x - m.mean, k as f64))
                .sum::<f64>()
                / n;
            Ok(mk / libm::pow(libm::sqrt(m.variance()), k as f64))
        }
    }
}

fn fano_from(mean: f64, variance: f64) -> f64 {
    let denom = if mean.abs() < FANO_EPSILON {
        if mean < 0.0 {
            -FANO_EPSILON
        } else {
            FANO_EPSILON
        }
    } else {
        mean
    };
    variance / denom
}

/// Population variance over mean. Near-zero means are clamped to `±1e-12`
/// (zero counts as positive), so the value is always finite and may be negative.
pub fn fano_factor(samples: &[f64]) -> Result<f64> {
    let m = CentralMoments::compute(samples)?;
    Ok(fano_from(m.mean, m.variance()))
}

/// Mean over frequency bins of the Welch PSD estimate.
pub fn power_spectral_density(samples: &[f64], sample_rate: f64, welch: &WelchConfig) -> Result<f64> {
    Ok(spectral::welch(samples, sample_rate, welch)?.mean())
}

/// The eight statistics of one frame.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FrameFeatures {
    pub mean: f64,
    pub variance: f64,
    pub skewness: f64,
    pub kurtosis: f64,
    pub hyper_skewness: f64,
    pub hyper_flatness: f64,
    pub fano_factor: f64,
    pub psd: f64,
}

impl FrameFeatures {
    pub fn to_array(&self) -> [f64; STATISTICS] {
        [
            self.mean,
            self.variance,
            self.skewness,
            self.kurtosis,
            self.hyper_skewness,
            self.hyper_flatness,
            self.fano_factor,
            self.psd,
        ]
    }
}

pub fn extract_frame_features(
    frame: &[f64],
    sample_rate: u32,
    config: &FeatureConfig,
) -> Result<FrameFeatures> {
    let min = config.min_frame_len.max(2);
    if frame.len() < min {
        return Err(Error::FrameTooShort {
            len: frame.len(),
            min,
        });
    }
    let m = CentralMoments::compute(frame)?;
    Ok(FrameFeatures {
        mean: m.mean,
        variance: m.variance(),
        skewness: m.standardized(3)?,
        kurtosis: m.standardized(4)?,
        hyper_skewness: m.standardized(5)?,
        hyper_flatness: m.standardized(6)?,
        fano_factor: fano_from(m.mean, m.variance()),
        psd: power_spectral_density(frame, sample_rate as f64, &config.welch)?,
    })
}

/// 24 frame features in [`FEATURE_NAMES`] order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FeatureVector {
    pub values: [f64; FRAME_FEATURES],
}

impl FeatureVector {
    pub fn names() -> &'static [&'static str; FRAME_FEATURES] {
        &FEATURE_NAMES
    }

    pub fn from_frames(frames: &[FrameFeatures; 3]) -> Self {
        let mut values = [0.0; FRAME_FEATURES];
        for (f, frame) in frames.iter().enumerate() {
            for (s, v) in frame.to_array().into_iter().enumerate() {
                values[s * 3 + f] = v;
            }
        }
        Self { values }
    }

    pub fn get(&self, name: &str) -> Option<f64> {
        FEATURE_NAMES
            .iter()
            .position(|n| *n == name)
            .map(|i| self.values[i])
    }
}

/// The eight statistics computed on a whole signal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BaselineVector {
    pub values: [f64; STATISTICS],
}

impl BaselineVector {
    pub fn names() -> &'static [&'static str; STATISTICS] {
        &STATISTIC_NAMES
    }
}

pub fn extract_feature_vector(frames: &FrameTriple<'_>, config: &FeatureConfig) -> Result<FeatureVector> {
    let mut out = [FrameFeatures {
        mean: 0.0,
        variance: 0.0,
        skewness: 0.0,
        kurtosis: 0.0,
        hyper_skewness: 0.0,
        hyper_flatness: 0.0,
        fano_factor: 0.0,
        psd: 0.0,
    }; 3];
    for (slot, id) in out.iter_mut().zip(FrameId::ALL) {
        *slot = extract_frame_features(frames.frame(id), frames.sample_rate, config)
            .map_err(|e| e.in_frame(id))?;
    }
    Ok(FeatureVector::from_frames(&out))
}

pub fn extract_baseline_features(signal: &MonoSignal, config: &FeatureConfig) -> Result<BaselineVector> {
    let f = extract_frame_features(signal.samples(), signal.sample_rate(), config)?;
    Ok(BaselineVector {
        values: f.to_array(),
    })
}
