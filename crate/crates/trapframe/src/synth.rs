//! Synthetic two-class corpora with a known location for the class signal.
//!
//! Every clip has a random body (loudness, tone/noise mix, tone frequencies,
//! slow amplitude modulation) followed by a linear fade. The corpus kind
//! decides where the classes differ:
//!
//! - `OpeningNoise`: only the opening is class dependent, a noise burst whose
//!   level differs between classes; bodies come from one distribution.
//! - `OpeningOffset`: the opening noise carries a class-dependent DC offset,
//!   which plants `Mean-I` as the discriminative feature.
//! - `Uniform`: the tone/noise mix differs between classes over the whole
//!   clip, opening included.

use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use trapframe_core::{AudioClip, Class};

use crate::error::{AppError, AppResult};
use crate::wav::{encode_wav, SampleFormat};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusKind {
    OpeningNoise,
    OpeningOffset,
    Uniform,
}

impl std::str::FromStr for CorpusKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "opening-noise" => Ok(CorpusKind::OpeningNoise),
            "opening-offset" => Ok(CorpusKind::OpeningOffset),
            "uniform" => Ok(CorpusKind::Uniform),
            _ => Err(format!("unknown corpus kind `{s}` (opening-noise, opening-offset, uniform)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthSpec {
    pub kind: CorpusKind,
    pub clips_per_class: usize,
    pub sample_rate: u32,
    pub len: usize,
    pub opening_fraction: f64,
    pub seed: u64,
}

impl SynthSpec {
    pub fn new(kind: CorpusKind, clips_per_class: usize, seed: u64) -> Self {
        Self {
            kind,
            clips_per_class,
            sample_rate: 8000,
            len: 12_000,
            opening_fraction: 0.05,
            seed,
        }
    }
}

const LABELS: [&str; 2] = ["a", "b"];

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// One clip. Clip `index` of a class always gets the same RNG stream.
pub fn synth_clip(spec: &SynthSpec, class: Class, index: usize) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    rng.set_stream((2 * index + class.index()) as u64);
    let fs = spec.sample_rate as f64;
    let n = spec.len;
    let n_open = (spec.opening_fraction * n as f64).floor() as usize;

    let amp = rng.random_range(0.2..0.4);
    let mix: f64 = match (spec.kind, class) {
        (CorpusKind::Uniform, Class::One) => rng.random_range(0.0..0.3),
        (CorpusKind::Uniform, Class::Two) => rng.random_range(0.7..1.0),
        _ => rng.random_range(0.0..1.0),
    };
    let tones: Vec<(f64, f64)> = (0..3)
        .map(|_| (rng.random_range(100.0..1500.0), rng.random_range(0.0..2.0 * PI)))
        .collect();
    let depth = rng.random_range(0.0..0.5);
    let rate = rng.random_range(0.5..4.0);
    let phase = rng.random_range(0.0..2.0 * PI);

    let (level, offset) = match (spec.kind, class) {
        (CorpusKind::OpeningNoise, Class::One) => (0.02, 0.0),
        (CorpusKind::OpeningNoise, Class::Two) => (0.04, 0.0),
        (CorpusKind::OpeningOffset, Class::One) => (0.03, 0.0),
        (CorpusKind::OpeningOffset, Class::Two) => (0.03, 0.03),
        (CorpusKind::Uniform, _) => (0.03, 0.0),
    };
    let level = level * rng.random_range(0.9..1.1);

    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let t = i as f64 / fs;
        let v = if i < n_open {
            if spec.kind == CorpusKind::Uniform {
                // the mix difference reaches into the opening as well
                let ramp = (i + 1) as f64 / n_open as f64;
                let tone: f64 = tones.iter().map(|(f, p)| (2.0 * PI * f * t + p).sin()).sum::<f64>() / 3.0;
                amp * ramp * (mix * tone + (1.0 - mix) * 0.4 * normal(&mut rng)) + level * normal(&mut rng)
            } else {
                offset + level * normal(&mut rng)
            }
        } else {
            let tone: f64 = tones.iter().map(|(f, p)| (2.0 * PI * f * t + p).sin()).sum::<f64>() / 3.0;
            let env = 1.0 + depth * (2.0 * PI * rate * t + phase).sin();
            let fade = if i >= n - n_open { (n - i) as f64 / n_open as f64 } else { 1.0 };
            amp * env * fade * (mix * tone + (1.0 - mix) * 0.4 * normal(&mut rng))
        };
        out.push(v.clamp(-1.0, 1.0));
    }
    out
}

/// Writes 16-bit mono clips plus `manifest.csv` into `dir`; returns the
/// manifest path. Files alternate between classes.
pub fn write_corpus(dir: &Path, spec: &SynthSpec) -> AppResult<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))?;
    let mut manifest = String::from("path,label\n");
    for index in 0..spec.clips_per_class {
        for class in Class::BOTH {
            let name = format!("{}_{index:04}.wav", LABELS[class.index()]);
            let clip = AudioClip::new(spec.sample_rate, vec![synth_clip(spec, class, index)])?;
            let path = dir.join(&name);
            fs::write(&path, encode_wav(&clip, SampleFormat::I16)).map_err(|e| AppError::io(&path, e))?;
            manifest.push_str(&format!("{name},{}\n", LABELS[class.index()]));
        }
    }
    let path = dir.join("manifest.csv");
    fs::write(&path, manifest).map_err(|e| AppError::io(&path, e))?;
    Ok(path)
}
