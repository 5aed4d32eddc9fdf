//! Monte Carlo cross-validation.
//!
//! Each iteration draws its own split from a ChaCha8 stream keyed by
//! `(seed, iteration)`, so iterations can run in any order or in parallel and
//! still produce the same report.

use alloc::string::String;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::classifiers::{Learner, Predictor};
use crate::dataset::{Class, Dataset};
use crate::error::{Error, Result};
use crate::selection::{fit_pca, rank_features, PcaModel};

/// Split redraw budget before [`Error::DegenerateSplit`].
pub const MAX_SPLIT_ATTEMPTS: usize = 100;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CvConfig {
    pub iterations: usize,
    pub test_fraction: f64,
    pub stratified: bool,
    pub seed: u64,
}

impl Default for CvConfig {
    fn default() -> Self {
        Self {
            iterations: 500,
            test_fraction: 0.2,
            stratified: true,
            seed: 0,
        }
    }
}

impl CvConfig {
    pub fn validate(&self) -> Result<()> {
        if self.iterations == 0 {
            return Err(Error::InvalidParameter("iterations must be at least 1".into()));
        }
        if !(self.test_fraction > 0.0 && self.test_fraction < 1.0) {
            return Err(Error::InvalidParameter("test fraction must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

/// Train and test row indices of one iteration, both ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Split {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

fn rng_for(seed: u64, iteration: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(iteration as u64);
    rng
}

fn round_count(fraction: f64, n: usize) -> usize {
    libm::round(fraction * n as f64) as usize
}

/// Draws the split for `iteration`.
///
/// Stratified splits take `round(test_fraction * n_c)` rows of each class,
/// clamped so at least one row is tested and two remain for training.
/// Unstratified splits are redrawn until both classes keep two training rows.
pub fn split_indices(labels: &[Class], config: &CvConfig, iteration: usize) -> Result<Split> {
    config.validate()?;
    let mut rng = rng_for(config.seed, iteration);
    let (mut train, mut test) = (Vec::new(), Vec::new());
    if config.stratified {
        for class in Class::BOTH {
            let mut idx: Vec<usize> = (0..labels.len()).filter(|&i| labels[i] == class).collect();
            let n = idx.len();
            if n < 2 {
                return Err(Error::DegenerateSplit { attempts: 0 });
            }
            let take = if n >= 3 {
                round_count(config.test_fraction, n).clamp(1, n - 2)
            } else {
                0
            };
            idx.shuffle(&mut rng);
            test.extend_from_slice(&idx[..take]);
            train.extend_from_slice(&idx[take..]);
        }
        if test.is_empty() {
            return Err(Error::DegenerateSplit { attempts: 1 });
        }
    } else {
        let n = labels.len();
        let take = round_count(config.test_fraction, n).clamp(1, n.saturating_sub(1).max(1));
        let mut idx: Vec<usize> = (0..n).collect();
        let mut attempts = 0;
        loop {
            if attempts == MAX_SPLIT_ATTEMPTS {
                return Err(Error::DegenerateSplit { attempts });
            }
            attempts += 1;
            idx.shuffle(&mut rng);
            let ok = Class::BOTH
                .iter()
                .all(|&c| idx[take..].iter().filter(|&&i| labels[i] == c).count() >= 2);
            if ok {
                test.extend_from_slice(&idx[..take]);
                train.extend_from_slice(&idx[take..]);
                break;
            }
        }
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok(Split { train, test })
}

/// Which columns a classifier sees in each iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum FeatureSelector {
    /// Top `k` features by FDR, ranked on the training split.
    RankedPrefix(usize),
    /// First `k` principal components, fitted on the training split.
    PcPrefix(usize),
    /// Fixed column indices.
    Explicit(Vec<usize>),
}

impl FeatureSelector {
    /// Table label: "Top k", "All n", "PC 1-k", "All n PC" or the column names.
    pub fn describe(&self, names: &[String]) -> String {
        let n = names.len();
        match self {
            FeatureSelector::RankedPrefix(k) if *k == n => alloc::format!("All {n}"),
            FeatureSelector::RankedPrefix(k) => alloc::format!("Top {k}"),
            FeatureSelector::PcPrefix(k) if *k == n => alloc::format!("All {n} PC"),
            FeatureSelector::PcPrefix(1) => "PC 1".into(),
            FeatureSelector::PcPrefix(k) => alloc::format!("PC 1-{k}"),
            FeatureSelector::Explicit(cols) => cols
                .iter()
                .map(|&j| names.get(j).map_or("?", |s| s.as_str()))
                .collect::<Vec<_>>()
                .join("+"),
        }
    }

    fn check(&self, n: usize) -> Result<()> {
        let ok = match self {
            FeatureSelector::RankedPrefix(k) | FeatureSelector::PcPrefix(k) => (1..=n).contains(k),
            FeatureSelector::Explicit(cols) => !cols.is_empty() && cols.iter().all(|&j| j < n),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidParameter(alloc::format!(
                "feature selector {self:?} does not fit {n} features"
            )))
        }
    }
}

/// A selector fitted on one training split.
#[derive(Debug, Clone, PartialEq)]
pub enum FittedSelector {
    /// Chosen columns, z-scored with training statistics.
    Columns {
        columns: Vec<usize>,
        means: Vec<f64>,
        stds: Vec<f64>,
    },
    Pca { model: PcaModel, k: usize },
}

pub fn fit_selector(train: &Dataset, selector: &FeatureSelector) -> Result<FittedSelector> {
    selector.check(train.n_features())?;
    let columns = match selector {
        FeatureSelector::PcPrefix(k) => {
            return Ok(FittedSelector::Pca {
                model: fit_pca(train)?,
                k: *k,
            })
        }
        FeatureSelector::RankedPrefix(k) => rank_features(train).top_indices(*k)?,
        FeatureSelector::Explicit(cols) => cols.clone(),
    };
    let n = train.n_rows() as f64;
    let mut means = Vec::with_capacity(columns.len());
    let mut stds = Vec::with_capacity(columns.len());
    for &j in &columns {
        let col = train.column(j);
        let m = col.iter().sum::<f64>() / n;
        let v = col.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
        let s = libm::sqrt(v);
        means.push(m);
        stds.push(if s > 0.0 { s } else { 1.0 });
    }
    Ok(FittedSelector::Columns { columns, means, stds })
}

impl FittedSelector {
    pub fn output_names(&self, data: &Dataset) -> Vec<String> {
        match self {
            FittedSelector::Columns { columns, .. } => {
                columns.iter().map(|&j| data.feature_names()[j].clone()).collect()
            }
            FittedSelector::Pca { k, .. } => PcaModel::component_names(*k),
        }
    }

    pub fn transform(&self, row: &[f64]) -> Result<Vec<f64>> {
        match self {
            FittedSelector::Columns { columns, means, stds } => Ok(columns
                .iter()
                .zip(means)
                .zip(stds)
                .map(|((&j, m), s)| (row[j] - m) / s)
                .collect()),
            FittedSelector::Pca { model, k } => model.transform(row, *k),
        }
    }
}

pub fn misclassification_rate(predictions: &[Class], truth: &[Class]) -> Result<f64> {
    if predictions.len() != truth.len() {
        return Err(Error::LengthMismatch {
            left: predictions.len(),
            right: truth.len(),
        });
    }
    if truth.is_empty() {
        return Err(Error::Empty);
    }
    let wrong = predictions.iter().zip(truth).filter(|(p, t)| p != t).count();
    Ok(wrong as f64 / truth.len() as f64)
}

/// Test misclassification rate of one Monte Carlo iteration.
pub fn run_iteration<L: Learner>(
    data: &Dataset,
    learner: &L,
    selector: &FeatureSelector,
    config: &CvConfig,
    iteration: usize,
) -> Result<f64> {
    let split = split_indices(data.labels(), config, iteration)?;
    let train = data.select_rows(&split.train)?;
    let fitted = fit_selector(&train, selector)?;
    let projected = train.map_rows(fitted.output_names(&train), |r| fitted.transform(r))?;
    let model = learner.fit(&projected)?;
    let mut predictions = Vec::with_capacity(split.test.len());
    let mut truth = Vec::with_capacity(split.test.len());
    for &i in &split.test {
        predictions.push(model.predict(&fitted.transform(data.row(i))?)?);
        truth.push(data.labels()[i]);
    }
    misclassification_rate(&predictions, &truth)
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EvalReport {
    pub classifier: String,
    pub variant: String,
    pub params: Vec<(String, String)>,
    pub feature_set: String,
    pub cv: CvConfig,
    pub rates: Vec<f64>,
    pub mean: f64,
    /// Sample standard deviation of the per-iteration rates.
    pub std: f64,
}

impl EvalReport {
    /// Aggregates per-iteration rates, summed in iteration order.
    pub fn from_rates<L: Learner>(learner: &L, feature_set: String, cv: CvConfig, rates: Vec<f64>) -> Self {
        let n = rates.len() as f64;
        let mean = rates.iter().sum::<f64>() / n;
        let std = if rates.len() > 1 {
            libm::sqrt(rates.iter().map(|r| (r - mean) * (r - mean)).sum::<f64>() / (n - 1.0))
        } else {
            0.0
        };
        Self {
            classifier: learner.name(),
            variant: learner.variant(),
            params: learner.params(),
            feature_set,
            cv,
            rates,
            mean,
            std,
        }
    }

    pub fn accuracy(&self) -> f64 {
        1.0 - self.mean
    }
}

/// Runs `config.iterations` Monte Carlo iterations serially.
pub fn monte_carlo_cv<L: Learner>(
    data: &Dataset,
    learner: &L,
    selector: &FeatureSelector,
    config: &CvConfig,
) -> Result<EvalReport> {
    config.validate()?;
    selector.check(data.n_features())?;
    let rates = (0..config.iterations)
        .map(|i| run_iteration(data, learner, selector, config, i))
        .collect::<Result<Vec<_>>>()?;
    Ok(EvalReport::from_rates(
        learner,
        selector.describe(data.feature_names()),
        *config,
        rates,
    ))
}
