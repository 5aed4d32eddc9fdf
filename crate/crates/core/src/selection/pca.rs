//! Principal component analysis on z-scored features.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg::outer_accumulate;

/// Fitted PCA: per-feature standardization plus the eigenbasis of the
/// correlation matrix.
///
/// Standard deviations and covariance both use `1/(n-1)`, so the variance of
/// the training scores along component `i` equals `eigenvalues[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PcaModel {
    pub feature_names: Vec<String>,
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
    /// `d x d`; column `i` is component `i`, unit length, largest-magnitude entry positive.
    pub loadings: DMatrix<f64>,
    /// Non-increasing, clamped to be non-negative.
    pub eigenvalues: Vec<f64>,
    /// Percentage of total variance per component.
    pub variance_pct: Vec<f64>,
    /// Running sum of `variance_pct`.
    pub cumulative_pct: Vec<f64>,
}

pub fn fit_pca(data: &Dataset) -> Result<PcaModel> {
    let n = data.n_rows();
    let d = data.n_features();
    if n < 2 {
        return Err(Error::InvalidDataset("PCA needs at least two rows".into()));
    }
    let mut means = vec![0.0; d];
    for r in data.rows() {
        for (m, x) in means.iter_mut().zip(r) {
            *m += x;
        }
    }
    means.iter_mut().for_each(|m| *m /= n as f64);
    let mut stds = vec![0.0; d];
    for r in data.rows() {
        for ((s, x), m) in stds.iter_mut().zip(r).zip(&means) {
            *s += (x - m) * (x - m);
        }
    }
    for (j, s) in stds.iter_mut().enumerate() {
        *s = libm::sqrt(*s / (n as f64 - 1.0));
        if !(*s > 0.0) {
            return Err(Error::ConstantFeature {
                name: data.feature_names()[j].clone(),
            });
        }
    }

    let mut cov = DMatrix::zeros(d, d);
    let mut z = vec![0.0; d];
    for r in data.rows() {
        for (j, zj) in z.iter_mut().enumerate() {
            *zj = (r[j] - means[j]) / stds[j];
        }
        outer_accumulate(&mut cov, &z, 1.0 / (n as f64 - 1.0));
    }
    // symmetrize away accumulated rounding before the eigen solve
    let cov = (&cov + cov.transpose()) * 0.5;
    let eig = SymmetricEigen::new(cov);

    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]).then(a.cmp(&b)));

    let mut loadings = DMatrix::zeros(d, d);
    let mut eigenvalues = Vec::with_capacity(d);
    for (col, &src) in order.iter().enumerate() {
        let v = eig.eigenvectors.column(src);
        let pivot = (0..d)
            .max_by(|&a, &b| v[a].abs().total_cmp(&v[b].abs()).then(b.cmp(&a)))
            .unwrap_or(0);
        let sign = if v[pivot] < 0.0 { -1.0 } else { 1.0 };
        for i in 0..d {
            loadings[(i, col)] = sign * v[i];
        }
        eigenvalues.push(eig.eigenvalues[src].max(0.0));
    }

    let total: f64 = eigenvalues.iter().sum();
    let variance_pct: Vec<f64> = eigenvalues.iter().map(|e| 100.0 * e / total).collect();
    let mut running = 0.0;
    let cumulative_pct = eigenvalues
        .iter()
        .map(|e| {
            running += e;
            100.0 * running / total
        })
        .collect();

    Ok(PcaModel {
        feature_names: data.feature_names().to_vec(),
        means,
        stds,
        loadings,
        eigenvalues,
        variance_pct,
        cumulative_pct,
    })
}

impl PcaModel {
    pub fn dimension(&self) -> usize {
        self.means.len()
    }

    pub fn standardize(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: x.len(),
            });
        }
        Ok(x.iter()
            .zip(&self.means)
            .zip(&self.stds)
            .map(|((v, m), s)| (v - m) / s)
            .collect())
    }

    /// Scores of `x` on the first `k` components.
    pub fn transform(&self, x: &[f64], k: usize) -> Result<Vec<f64>> {
        if k == 0 || k > self.dimension() {
            return Err(Error::InvalidParameter(alloc::format!(
                "component count {k} outside 1..={}",
                self.dimension()
            )));
        }
        let z = self.standardize(x)?;
        Ok((0..k)
            .map(|c| self.loadings.column(c).iter().zip(&z).map(|(l, v)| l * v).sum())
            .collect())
    }

    /// Maps scores on the leading components back to the z-scored feature space.
    pub fn reconstruct(&self, scores: &[f64]) -> Result<Vec<f64>> {
        if scores.len() > self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: scores.len(),
            });
        }
        let mut z = vec![0.0; self.dimension()];
        for (c, s) in scores.iter().enumerate() {
            for (zi, l) in z.iter_mut().zip(self.loadings.column(c).iter()) {
                *zi += s * l;
            }
        }
        Ok(z)
    }

    /// Component names `PC1..PCk`.
    pub fn component_names(k: usize) -> Vec<String> {
        (1..=k).map(|i| alloc::format!("PC{i}")).collect()
    }
}
