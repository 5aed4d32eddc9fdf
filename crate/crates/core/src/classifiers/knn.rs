//! k-nearest-neighbour voting under four distance metrics.

use alloc::vec::Vec;

use crate::dataset::{Class, Dataset};
use crate::error::{Error, Result};
use crate::linalg::{dot, squared_distance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Metric {
    Euclidean,
    /// Sum of absolute differences.
    Cityblock,
    /// `1 - cos(x, y)`
    Cosine,
    /// `1 - pearson(x, y)`
    Correlation,
}

impl Metric {
    pub const ALL: [Metric; 4] = [Metric::Euclidean, Metric::Cityblock, Metric::Cosine, Metric::Correlation];

    pub fn distance(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        if x.len() != y.len() {
            return Err(Error::DimensionMismatch {
                expected: x.len(),
                found: y.len(),
            });
        }
        match self {
            Metric::Euclidean => Ok(libm::sqrt(squared_distance(x, y))),
            Metric::Cityblock => Ok(x.iter().zip(y).map(|(a, b)| (a - b).abs()).sum()),
            Metric::Cosine => {
                let nx = libm::sqrt(dot(x, x));
                let ny = libm::sqrt(dot(y, y));
                if nx == 0.0 || ny == 0.0 {
                    return Err(Error::ZeroVector);
                }
                Ok(1.0 - dot(x, y) / (nx * ny))
            }
            Metric::Correlation => {
                let cx = centred(x);
                let cy = centred(y);
                let nx = libm::sqrt(dot(&cx, &cx));
                let ny = libm::sqrt(dot(&cy, &cy));
                if nx == 0.0 || ny == 0.0 {
                    return Err(Error::ConstantVector);
                }
                Ok(1.0 - dot(&cx, &cy) / (nx * ny))
            }
        }
    }
}

fn centred(x: &[f64]) -> Vec<f64> {
    let m = x.iter().sum::<f64>() / x.len() as f64;
    x.iter().map(|v| v - m).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KnnSpec {
    pub k: usize,
    pub metric: Metric,
}

impl KnnSpec {
    pub fn new(k: usize, metric: Metric) -> Self {
        Self { k, metric }
    }
}

/// Majority vote of the `k` nearest training rows. Equal distances are
/// ordered by training row index; a tied vote goes to class 1.
pub fn knn_predict(train: &Dataset, spec: &KnnSpec, x: &[f64]) -> Result<Class> {
    if spec.k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if spec.k > train.n_rows() {
        return Err(Error::KTooLarge {
            k: spec.k,
            rows: train.n_rows(),
        });
    }
    let mut dists = train
        .rows()
        .enumerate()
        .map(|(i, r)| spec.metric.distance(x, r).map(|d| (d, i)))
        .collect::<Result<Vec<_>>>()?;
    dists.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let ones = dists[..spec.k]
        .iter()
        .filter(|(_, i)| train.labels()[*i] == Class::One)
        .count();
    Ok(if 2 * ones >= spec.k { Class::One } else { Class::Two })
}
