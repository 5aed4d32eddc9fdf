//! Monte Carlo cross-validation, classifier/feature-set sweeps and paired
//! frame-vs-baseline comparison.

pub mod compare;
pub mod cv;
pub mod sweep;

pub use compare::{compare_datasets, ComparisonReport};
pub use cv::{
    fit_selector, misclassification_rate, monte_carlo_cv, run_iteration, split_indices, CvConfig, EvalReport,
    FeatureSelector, FittedSelector, Split,
};
pub use sweep::{default_selectors, sweep, SweepCell, FDR_PREFIXES, PCA_PREFIXES};
