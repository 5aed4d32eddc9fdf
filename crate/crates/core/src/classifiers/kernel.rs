use alloc::vec::Vec;

use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::linalg::{dot, squared_distance};

/// Kernel as configured; an RBF width of `None` is resolved from training data.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "type", rename_all = "lowercase"))]
pub enum KernelSpec {
    Linear,
    /// `(x.y + 1)^2`
    Quadratic,
    /// `(x.y + coef)^degree`
    Polynomial { degree: u32, coef: f64 },
    /// `exp(-gamma * |x - y|^2)`
    Rbf { gamma: Option<f64> },
}

impl KernelSpec {
    pub fn polynomial() -> Self {
        KernelSpec::Polynomial { degree: 3, coef: 1.0 }
    }

    pub fn rbf() -> Self {
        KernelSpec::Rbf { gamma: None }
    }

    /// Fixes the RBF width with the median heuristic when it is not given.
    pub fn resolve(&self, train: &Dataset) -> Kernel {
        match *self {
            KernelSpec::Linear => Kernel::Linear,
            KernelSpec::Quadratic => Kernel::Polynomial { degree: 2, coef: 1.0 },
            KernelSpec::Polynomial { degree, coef } => Kernel::Polynomial { degree, coef },
            KernelSpec::Rbf { gamma: Some(gamma) } => Kernel::Rbf { gamma },
            KernelSpec::Rbf { gamma: None } => Kernel::Rbf {
                gamma: median_gamma(train),
            },
        }
    }
}

/// A fully specified kernel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Kernel {
    Linear,
    Polynomial { degree: u32, coef: f64 },
    Rbf { gamma: f64 },
}

impl Kernel {
    /// Evaluates the kernel on equal-length vectors (unchecked).
    pub fn apply(&self, x: &[f64], y: &[f64]) -> f64 {
        match *self {
            Kernel::Linear => dot(x, y),
            Kernel::Polynomial { degree, coef } => libm::pow(dot(x, y) + coef, degree as f64),
            Kernel::Rbf { gamma } => libm::exp(-gamma * squared_distance(x, y)),
        }
    }
}

pub fn kernel_eval(kernel: &Kernel, x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() != y.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: y.len(),
        });
    }
    Ok(kernel.apply(x, y))
}

/// `1 / (d * median squared pairwise distance)`; falls back to `1 / d` when
/// the median distance is zero.
pub fn median_gamma(train: &Dataset) -> f64 {
    let rows: Vec<&[f64]> = train.rows().collect();
    let mut dists = Vec::with_capacity(rows.len() * (rows.len() - 1) / 2);
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            dists.push(squared_distance(rows[i], rows[j]));
        }
    }
    let d = train.n_features() as f64;
    if dists.is_empty() {
        return 1.0 / d;
    }
    let mid = dists.len() / 2;
    let (_, median, _) = dists.select_nth_unstable_by(mid, |a, b| a.total_cmp(b));
    if *median > 0.0 {
        1.0 / (d * *median)
    } else {
        1.0 / d
    }
}
