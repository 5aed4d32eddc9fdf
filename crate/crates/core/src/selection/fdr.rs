//! Fisher Discriminant Ratio ranking.

use alloc::string::String;
use alloc::vec::Vec;

use crate::dataset::{Class, Dataset};
use crate::error::{Error, Result};
use crate::stats::{mean, sample_variance};

/// `(mu1 - mu2)^2 / (var1 + var2)`. With zero total variance the score is
/// `+inf` for distinct means and `0` otherwise.
pub fn fdr_score(mu1: f64, mu2: f64, var1: f64, var2: f64) -> f64 {
    let num = (mu1 - mu2) * (mu1 - mu2);
    let den = var1 + var2;
    if den == 0.0 {
        if num == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    } else {
        num / den
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RankedFeature {
    /// Column index in the dataset the ranking was computed on.
    pub index: usize,
    pub name: String,
    pub score: f64,
}

/// Features in non-increasing FDR order; equal scores keep column order.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedFeatures {
    entries: Vec<RankedFeature>,
}

impl RankedFeatures {
    /// Sorts `entries` by descending score, ties by ascending index.
    pub fn from_scores(mut entries: Vec<RankedFeature>) -> Self {
        entries.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.index.cmp(&b.index)));
        Self { entries }
    }

    pub fn entries(&self) -> &[RankedFeature] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Column indices of the top `k` features, in rank order.
    pub fn top_indices(&self, k: usize) -> Result<Vec<usize>> {
        if k == 0 || k > self.entries.len() {
            return Err(Error::InvalidParameter(alloc::format!(
                "prefix size {k} outside 1..={}",
                self.entries.len()
            )));
        }
        Ok(self.entries[..k].iter().map(|e| e.index).collect())
    }
}

/// Ranks every column of `data` by FDR computed from per-class sample means
/// and unbiased sample variances.
pub fn rank_features(data: &Dataset) -> RankedFeatures {
    let entries = (0..data.n_features())
        .map(|j| {
            let a = data.class_column(Class::One, j);
            let b = data.class_column(Class::Two, j);
            RankedFeature {
                index: j,
                name: data.feature_names()[j].clone(),
                score: fdr_score(mean(&a), mean(&b), sample_variance(&a), sample_variance(&b)),
            }
        })
        .collect();
    RankedFeatures::from_scores(entries)
}
