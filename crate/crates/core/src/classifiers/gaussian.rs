//! Gaussian discriminant classifiers: linear, diagonal linear, quadratic,
//! diagonal quadratic (Gaussian naive Bayes) and nearest mean under a
//! per-class Mahalanobis distance.

use alloc::vec::Vec;

use nalgebra::{Cholesky, DMatrix, DVector, Dyn};

use crate::dataset::{Class, Dataset};
use crate::error::{Error, Result};
use crate::linalg::{add_ridge, condition_number, mean_diagonal, outer_accumulate, sort_rows, to_dvector};

/// Condition number above which the covariance gets a ridge.
pub const COVARIANCE_RIDGE_CONDITION: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum GaussianMode {
    /// Pooled full covariance.
    Linear,
    /// Pooled diagonal covariance.
    DiagLinear,
    /// Per-class full covariance.
    Quadratic,
    /// Per-class diagonal covariance (Gaussian naive Bayes).
    DiagQuadratic,
    /// Nearest class mean under each class's Mahalanobis distance.
    Mahalanobis,
}

impl GaussianMode {
    pub const ALL: [GaussianMode; 5] = [
        GaussianMode::Linear,
        GaussianMode::DiagLinear,
        GaussianMode::Quadratic,
        GaussianMode::DiagQuadratic,
        GaussianMode::Mahalanobis,
    ];

    fn pooled(self) -> bool {
        matches!(self, GaussianMode::Linear | GaussianMode::DiagLinear)
    }

    fn diagonal(self) -> bool {
        matches!(self, GaussianMode::DiagLinear | GaussianMode::DiagQuadratic)
    }
}

#[derive(Debug, Clone)]
struct Factor {
    cholesky: Cholesky<f64, Dyn>,
    log_det: f64,
}

impl PartialEq for Factor {
    fn eq(&self, other: &Self) -> bool {
        self.log_det == other.log_det && self.cholesky.l_dirty() == other.cholesky.l_dirty()
    }
}

impl Factor {
    fn new(cov: &DMatrix<f64>) -> Result<Self> {
        let cholesky = Cholesky::new(cov.clone()).ok_or(Error::SingularCovariance)?;
        let log_det = 2.0 * cholesky.l_dirty().diagonal().iter().map(|v| libm::log(*v)).sum::<f64>();
        if !log_det.is_finite() {
            return Err(Error::SingularCovariance);
        }
        Ok(Self { cholesky, log_det })
    }

    fn mahalanobis2(&self, diff: &DVector<f64>) -> f64 {
        diff.dot(&self.cholesky.solve(diff))
    }
}

/// A fitted Gaussian discriminant.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianModel {
    pub mode: GaussianMode,
    pub means: [Vec<f64>; 2],
    pub priors: [f64; 2],
    /// One pooled matrix, or one per class.
    pub covariances: Vec<DMatrix<f64>>,
    /// Ridge added to each covariance diagonal (zero when none was needed).
    pub ridge_applied: Vec<f64>,
    factors: Vec<Factor>,
}

/// Maximum-likelihood (1/n) covariance of `rows` about `mean`.
fn ml_covariance(rows: &[&[f64]], mean: &[f64], diagonal: bool) -> DMatrix<f64> {
    let d = mean.len();
    let n = rows.len() as f64;
    let mut cov = DMatrix::zeros(d, d);
    let mut centred = alloc::vec![0.0; d];
    for r in rows {
        for ((c, x), m) in centred.iter_mut().zip(r.iter()).zip(mean) {
            *c = x - m;
        }
        if diagonal {
            for (i, c) in centred.iter().enumerate() {
                cov[(i, i)] += c * c / n;
            }
        } else {
            outer_accumulate(&mut cov, &centred, 1.0 / n);
        }
    }
    cov
}

fn regularize(cov: &mut DMatrix<f64>, rows: usize, ridge: f64) -> f64 {
    let d = cov.nrows();
    if rows > d && condition_number(cov) <= COVARIANCE_RIDGE_CONDITION {
        return 0.0;
    }
    let scale = mean_diagonal(cov);
    let amount = if scale > 0.0 { ridge * scale } else { ridge };
    add_ridge(cov, amount);
    amount
}

/// Fits class means, priors and the covariance structure of `mode`.
///
/// Covariances are maximum-likelihood (1/n) estimates. When a covariance has
/// condition number above 1e12, or fewer rows than dimensions stand behind it,
/// `ridge * mean(diagonal)` is added to its diagonal. Rows are summed in a
/// fixed lexicographic order, so row order never changes the model.
pub fn fit_gaussian(train: &Dataset, mode: GaussianMode, ridge: f64) -> Result<GaussianModel> {
    if !(ridge >= 0.0) {
        return Err(Error::InvalidParameter("ridge must be non-negative".into()));
    }
    let mut grouped: [Vec<&[f64]>; 2] = [Vec::new(), Vec::new()];
    for (row, label) in train.rows().zip(train.labels()) {
        grouped[label.index()].push(row);
    }
    if grouped.iter().any(|g| g.is_empty()) {
        return Err(Error::SingleClassData);
    }
    for g in grouped.iter_mut() {
        sort_rows(g);
    }
    let d = train.n_features();
    let n = train.n_rows() as f64;
    let means: [Vec<f64>; 2] = core::array::from_fn(|c| {
        let rows = &grouped[c];
        let mut m = alloc::vec![0.0; d];
        for r in rows {
            for (mi, x) in m.iter_mut().zip(r.iter()) {
                *mi += x;
            }
        }
        m.iter_mut().for_each(|v| *v /= rows.len() as f64);
        m
    });
    let priors = [grouped[0].len() as f64 / n, grouped[1].len() as f64 / n];
    let per_class: Vec<DMatrix<f64>> = (0..2)
        .map(|c| ml_covariance(&grouped[c], &means[c], mode.diagonal()))
        .collect();

    let mut covariances = if mode.pooled() {
        let pooled = &per_class[0] * priors[0] + &per_class[1] * priors[1];
        alloc::vec![pooled]
    } else {
        per_class
    };
    let support: Vec<usize> = if mode.pooled() {
        alloc::vec![train.n_rows()]
    } else {
        grouped.iter().map(|g| g.len()).collect()
    };
    let ridge_applied: Vec<f64> = covariances
        .iter_mut()
        .zip(&support)
        .map(|(c, &rows)| regularize(c, rows, ridge))
        .collect();
    let factors = covariances.iter().map(Factor::new).collect::<Result<Vec<_>>>()?;
    Ok(GaussianModel {
        mode,
        means,
        priors,
        covariances,
        ridge_applied,
        factors,
    })
}

impl GaussianModel {
    pub fn dimension(&self) -> usize {
        self.means[0].len()
    }

    fn factor(&self, class: usize) -> &Factor {
        if self.factors.len() == 1 {
            &self.factors[0]
        } else {
            &self.factors[class]
        }
    }

    /// Per-class discriminant scores; larger is more likely.
    ///
    /// Log posterior up to a shared constant for the Gaussian modes, negative
    /// squared Mahalanobis distance for [`GaussianMode::Mahalanobis`].
    pub fn scores(&self, x: &[f64]) -> Result<[f64; 2]> {
        if x.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: x.len(),
            });
        }
        let x = to_dvector(x);
        Ok(core::array::from_fn(|c| {
            let diff = &x - to_dvector(&self.means[c]);
            let f = self.factor(c);
            let d2 = f.mahalanobis2(&diff);
            match self.mode {
                GaussianMode::Mahalanobis => -d2,
                _ => libm::log(self.priors[c]) - 0.5 * f.log_det - 0.5 * d2,
            }
        }))
    }

    pub fn predict(&self, x: &[f64]) -> Result<Class> {
        let [a, b] = self.scores(x)?;
        Ok(if a >= b { Class::One } else { Class::Two })
    }

    /// `(w, b)` with `w.x + b = score(class 1) - score(class 2)` for the linear mode.
    pub fn linear_discriminant(&self) -> Option<(Vec<f64>, f64)> {
        if self.mode != GaussianMode::Linear {
            return None;
        }
        let f = &self.factors[0];
        let m1 = to_dvector(&self.means[0]);
        let m2 = to_dvector(&self.means[1]);
        let w = f.cholesky.solve(&(&m1 - &m2));
        let b = -0.5 * (m1.dot(&f.cholesky.solve(&m1)) - m2.dot(&f.cholesky.solve(&m2)))
            + libm::log(self.priors[0] / self.priors[1]);
        Some((w.iter().copied().collect(), b))
    }
}
