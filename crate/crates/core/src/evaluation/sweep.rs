use alloc::string::String;
use alloc::vec::Vec;

use super::cv::{monte_carlo_cv, CvConfig, EvalReport, FeatureSelector};
use crate::classifiers::Learner;
use crate::dataset::Dataset;
use crate::error::Result;

/// FDR prefix sizes tabulated by default.
pub const FDR_PREFIXES: [usize; 6] = [2, 6, 9, 19, 22, 24];
/// Principal component counts tabulated by default.
pub const PCA_PREFIXES: [usize; 6] = [5, 7, 9, 11, 13, 24];

/// Default selector grid, dropping sizes larger than `n_features`.
pub fn default_selectors(n_features: usize) -> Vec<FeatureSelector> {
    let fdr = FDR_PREFIXES
        .iter()
        .filter(|&&k| k <= n_features)
        .map(|&k| FeatureSelector::RankedPrefix(k));
    let pca = PCA_PREFIXES
        .iter()
        .filter(|&&k| k <= n_features)
        .map(|&k| FeatureSelector::PcPrefix(k));
    fdr.chain(pca).collect()
}

/// One classifier/feature-set cell. A failing cell keeps its error so the
/// rest of the table still gets filled.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCell {
    pub classifier: String,
    pub variant: String,
    pub feature_set: String,
    pub result: Result<EvalReport>,
}

/// Runs every learner against every selector with the same CV config.
pub fn sweep<L: Learner>(
    data: &Dataset,
    learners: &[L],
    selectors: &[FeatureSelector],
    config: &CvConfig,
) -> Vec<SweepCell> {
    let mut out = Vec::with_capacity(learners.len() * selectors.len());
    for learner in learners {
        for selector in selectors {
            out.push(SweepCell {
                classifier: learner.name(),
                variant: learner.variant(),
                feature_set: selector.describe(data.feature_names()),
                result: monte_carlo_cv(data, learner, selector, config),
            });
        }
    }
    out
}
