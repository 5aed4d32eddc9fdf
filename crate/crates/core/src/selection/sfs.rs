//! Sequential forward selection.

use alloc::string::String;
use alloc::vec::Vec;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::selection::fdr::RankedFeatures;

#[derive(Debug, Clone, PartialEq)]
pub struct SfsStep {
    /// Column indices in selection order.
    pub features: Vec<usize>,
    pub names: Vec<String>,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SfsTrace {
    pub steps: Vec<SfsStep>,
}

impl SfsTrace {
    /// Step with the highest score; the earliest (smallest set) wins ties.
    pub fn best(&self) -> Option<&SfsStep> {
        self.steps
            .iter()
            .fold(None, |best: Option<&SfsStep>, s| match best {
                Some(b) if b.score >= s.score => Some(b),
                _ => Some(s),
            })
    }
}

/// Grows a feature set one column at a time, scoring each set with `evaluator`
/// (higher is better).
///
/// With a ranking, step `k` evaluates exactly the top `k` ranked features.
/// Without one, each step greedily adds the column that maximizes the score,
/// with ties going to the lowest column index.
pub fn sfs<F>(
    data: &Dataset,
    order: Option<&RankedFeatures>,
    mut evaluator: F,
    max_k: usize,
) -> Result<SfsTrace>
where
    F: FnMut(&[usize]) -> Result<f64>,
{
    let d = data.n_features();
    if max_k == 0 || max_k > d {
        return Err(Error::InvalidParameter(alloc::format!(
            "max_k {max_k} outside 1..={d}"
        )));
    }
    let names = |idx: &[usize]| -> Vec<String> {
        idx.iter().map(|&j| data.feature_names()[j].clone()).collect()
    };
    let mut steps = Vec::with_capacity(max_k);
    match order {
        Some(ranking) => {
            if ranking.len() != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: ranking.len(),
                });
            }
            for k in 1..=max_k {
                let features = ranking.top_indices(k)?;
                let score = evaluator(&features)?;
                steps.push(SfsStep {
                    names: names(&features),
                    features,
                    score,
                });
            }
        }
        None => {
            let mut chosen: Vec<usize> = Vec::with_capacity(max_k);
            for _ in 0..max_k {
                let mut best: Option<(usize, f64)> = None;
                let mut trial = chosen.clone();
                trial.push(0);
                for j in (0..d).filter(|j| !chosen.contains(j)) {
                    *trial.last_mut().unwrap() = j;
                    let score = evaluator(&trial)?;
                    if best.is_none_or(|(_, s)| score > s) {
                        best = Some((j, score));
                    }
                }
                let (j, score) = best.expect("a candidate remains while k <= d");
                chosen.push(j);
                steps.push(SfsStep {
                    features: chosen.clone(),
                    names: names(&chosen),
                    score,
                });
            }
        }
    }
    Ok(SfsTrace { steps })
}
