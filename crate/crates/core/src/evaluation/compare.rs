use super::cv::{monte_carlo_cv, CvConfig, EvalReport, FeatureSelector};
use crate::classifiers::Learner;
use crate::dataset::Dataset;
use crate::error::{Error, Result};

/// Frame features against whole-signal features under identical splits.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ComparisonReport {
    pub frame: EvalReport,
    pub baseline: EvalReport,
    /// Frame accuracy minus baseline accuracy.
    pub accuracy_delta: f64,
}

/// Evaluates both datasets with the same seed. Splits depend only on labels,
/// so matching labels guarantee matching splits.
pub fn compare_datasets<L: Learner>(
    frame: &Dataset,
    baseline: &Dataset,
    learner: &L,
    frame_selector: &FeatureSelector,
    baseline_selector: &FeatureSelector,
    config: &CvConfig,
) -> Result<ComparisonReport> {
    if frame.labels() != baseline.labels() {
        return Err(Error::InvalidDataset(
            "frame and baseline datasets must list the same clips in the same order".into(),
        ));
    }
    let frame = monte_carlo_cv(frame, learner, frame_selector, config)?;
    let baseline = monte_carlo_cv(baseline, learner, baseline_selector, config)?;
    let accuracy_delta = baseline.mean - frame.mean;
    Ok(ComparisonReport {
        frame,
        baseline,
        accuracy_delta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classifiers::{ClassifierConfig, GaussianMode};
    use crate::dataset::Class;
    use alloc::vec::Vec;

    #[test]
    fn informative_frame_beats_noise_baseline() {
        let n = 60;
        let labels: Vec<Class> = (0..n).map(|i| if i % 2 == 0 { Class::One } else { Class::Two }).collect();
        let frame_rows: Vec<[f64; 2]> = (0..n)
            .map(|i| {
                let t = i as f64;
                [if i % 2 == 0 { 5.0 } else { 0.0 } + (t * 0.9).sin(), (t * 1.7).cos()]
            })
            .collect();
        let base_rows: Vec<[f64; 2]> = (0..n)
            .map(|i| {
                let t = i as f64;
                [(t * 0.31).sin(), (t * 2.3).cos()]
            })
            .collect();
        let frame = Dataset::from_rows(&["a", "b"], &frame_rows, labels.clone()).unwrap();
        let base = Dataset::from_rows(&["a", "b"], &base_rows, labels).unwrap();
        let cfg = CvConfig { iterations: 40, seed: 11, ..CvConfig::default() };
        let lda = ClassifierConfig::gaussian(GaussianMode::Linear);
        let sel = FeatureSelector::RankedPrefix(2);
        let r = compare_datasets(&frame, &base, &lda, &sel, &sel, &cfg).unwrap();
        assert!(r.accuracy_delta > 0.3);
        assert!((r.accuracy_delta - (r.frame.accuracy() - r.baseline.accuracy())).abs() < 1e-12);

        let shuffled = base.with_labels(frame.labels().iter().rev().copied().collect()).unwrap();
        assert!(compare_datasets(&frame, &shuffled, &lda, &sel, &sel, &cfg).is_err());
    }
}
