//! Parallel drivers over the core evaluation routines. Iterations run on the
//! rayon pool but rates are collected in iteration order, so reports match
//! the serial versions bit for bit.

use rayon::prelude::*;
use trapframe_core::classifiers::Learner;
use trapframe_core::evaluation::{run_iteration, CvConfig, EvalReport, FeatureSelector, SweepCell};
use trapframe_core::{Dataset, Error, Result};

pub fn par_monte_carlo_cv<L: Learner + Sync>(
    data: &Dataset,
    learner: &L,
    selector: &FeatureSelector,
    config: &CvConfig,
) -> Result<EvalReport> {
    config.validate()?;
    let rates = (0..config.iterations)
        .into_par_iter()
        .map(|i| run_iteration(data, learner, selector, config, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(EvalReport::from_rates(
        learner,
        selector.describe(data.feature_names()),
        *config,
        rates,
    ))
}

pub fn par_sweep<L: Learner + Sync>(
    data: &Dataset,
    learners: &[L],
    selectors: &[FeatureSelector],
    config: &CvConfig,
) -> Vec<SweepCell> {
    let mut cells = Vec::with_capacity(learners.len() * selectors.len());
    for learner in learners {
        for selector in selectors {
            cells.push(SweepCell {
                classifier: learner.name(),
                variant: learner.variant(),
                feature_set: selector.describe(data.feature_names()),
                result: par_monte_carlo_cv(data, learner, selector, config),
            });
        }
    }
    cells
}

/// Paired frame/baseline evaluation with shared splits.
pub fn par_compare<L: Learner + Sync>(
    frame: &Dataset,
    baseline: &Dataset,
    learner: &L,
    config: &CvConfig,
) -> Result<trapframe_core::evaluation::ComparisonReport> {
    if frame.labels() != baseline.labels() {
        return Err(Error::InvalidDataset(
            "frame and baseline datasets must list the same clips in the same order".into(),
        ));
    }
    let f = par_monte_carlo_cv(frame, learner, &FeatureSelector::RankedPrefix(frame.n_features()), config)?;
    let b = par_monte_carlo_cv(baseline, learner, &FeatureSelector::RankedPrefix(baseline.n_features()), config)?;
    Ok(trapframe_core::evaluation::ComparisonReport {
        accuracy_delta: b.mean - f.mean,
        frame: f,
        baseline: b,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use trapframe_core::classifiers::{ClassifierConfig, GaussianMode};
    use trapframe_core::evaluation::{compare_datasets, monte_carlo_cv, sweep};
    use trapframe_core::Class;

    fn data() -> Dataset {
        let rows: Vec<[f64; 3]> = (0..60)
            .map(|i| {
                let t = i as f64;
                [(i % 2) as f64 + (t * 0.77).sin(), (t * 1.31).cos(), (t * 0.123).sin()]
            })
            .collect();
        let labels = (0..60).map(|i| if i % 2 == 0 { Class::One } else { Class::Two }).collect();
        Dataset::from_rows(&["a", "b", "c"], &rows, labels).unwrap()
    }

    #[test]
    fn parallel_equals_serial() {
        let d = data();
        let cfg = CvConfig { iterations: 64, seed: 5, ..CvConfig::default() };
        let learners = [
            ClassifierConfig::gaussian(GaussianMode::Quadratic),
            ClassifierConfig::gaussian(GaussianMode::DiagLinear),
        ];
        let sel = [FeatureSelector::RankedPrefix(2), FeatureSelector::PcPrefix(3)];
        assert_eq!(par_sweep(&d, &learners, &sel, &cfg), sweep(&d, &learners, &sel, &cfg));
        let serial = monte_carlo_cv(&d, &learners[0], &sel[0], &cfg).unwrap();
        assert_eq!(par_monte_carlo_cv(&d, &learners[0], &sel[0], &cfg).unwrap(), serial);
        let all = FeatureSelector::RankedPrefix(3);
        assert_eq!(
            par_compare(&d, &d, &learners[0], &cfg).unwrap(),
            compare_datasets(&d, &d, &learners[0], &all, &all, &cfg).unwrap()
        );
    }

    #[test]
    fn identical_tables_give_zero_delta() {
        let d = data();
        let cfg = CvConfig { iterations: 30, seed: 2, ..CvConfig::default() };
        let r = par_compare(&d, &d, &ClassifierConfig::gaussian(GaussianMode::Linear), &cfg).unwrap();
        assert_eq!(r.accuracy_delta, 0.0);
    }
}
