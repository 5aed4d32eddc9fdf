//! Corpus-wide feature extraction, parallel across files.

use std::path::Path;

use log::warn;
use rayon::prelude::*;
use trapframe_core::features::{extract_baseline_features, extract_feature_vector, BaselineVector, FEATURE_NAMES, STATISTIC_NAMES};
use trapframe_core::signal::{mixdown, split_frames};
use trapframe_core::{Dataset, FeatureConfig, FeatureVector};

use crate::cache::FeatureTable;
use crate::config::RunConfig;
use crate::error::{AppError, AppResult};
use crate::manifest::Manifest;
use crate::wav::read_wav;

/// Features of one clip: the 24 frame features and the 8 whole-signal ones.
#[derive(Debug, Clone, PartialEq)]
pub struct ClipFeatures {
    pub frame: FeatureVector,
    pub baseline: BaselineVector,
}

pub fn extract_clip(path: &Path, opening: f64, closing: f64, config: &FeatureConfig) -> AppResult<ClipFeatures> {
    let clip = read_wav(path).map_err(|source| AppError::Wav {
        path: path.display().to_string(),
        source,
    })?;
    let mono = mixdown(&clip);
    let with_path = |source| AppError::Extraction {
        path: path.display().to_string(),
        source,
    };
    let frames = split_frames(&mono, opening, closing).map_err(with_path)?;
    let frame = extract_feature_vector(&frames, config).map_err(with_path)?;
    let baseline = extract_baseline_features(&mono, config).map_err(with_path)?;
    Ok(ClipFeatures { frame, baseline })
}

/// Frame and baseline tables over the same rows, plus skipped files.
#[derive(Debug, Clone)]
pub struct Extraction {
    pub frame: FeatureTable,
    pub baseline: FeatureTable,
    pub skipped: Vec<(String, String)>,
}

/// Extracts every manifest entry. Unreadable or degenerate files are logged
/// and dropped; rows keep manifest order.
pub fn extract_corpus(manifest: &Manifest, base: &Path, cfg: &RunConfig) -> AppResult<Extraction> {
    let fc = cfg.feature_config();
    let results: Vec<_> = manifest
        .entries()
        .par_iter()
        .map(|e| extract_clip(&manifest.resolve(base, e), cfg.opening_fraction, cfg.closing_fraction, &fc))
        .collect();
    let (mut paths, mut labels, mut classes) = (Vec::new(), Vec::new(), Vec::new());
    let (mut frame_vals, mut base_vals) = (Vec::new(), Vec::new());
    let mut skipped = Vec::new();
    for (entry, result) in manifest.entries().iter().zip(results) {
        match result {
            Ok(f) => {
                paths.push(entry.path.clone());
                labels.push(entry.label.clone());
                classes.push(entry.class);
                frame_vals.extend_from_slice(&f.frame.values);
                base_vals.extend_from_slice(&f.baseline.values);
            }
            Err(e) => {
                warn!("skipping {}: {e}", entry.path);
                skipped.push((entry.path.clone(), e.to_string()));
            }
        }
    }
    if !skipped.is_empty() {
        warn!("skipped {} of {} files", skipped.len(), manifest.len());
    }
    let names = |n: &[&str]| n.iter().map(|s| s.to_string()).collect::<Vec<_>>();
    let frame = Dataset::new(names(&FEATURE_NAMES), frame_vals, classes.clone())?;
    let baseline = Dataset::new(names(&STATISTIC_NAMES), base_vals, classes)?;
    Ok(Extraction {
        frame: FeatureTable {
            paths: paths.clone(),
            labels: labels.clone(),
            data: frame,
        },
        baseline: FeatureTable {
            paths,
            labels,
            data: baseline,
        },
        skipped,
    })
}
