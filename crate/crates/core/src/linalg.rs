//! Thin helpers over nalgebra shared by selection and classifiers.

use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

/// Eigenvalue ratio of a symmetric positive semi-definite matrix.
/// Returns infinity when the smallest eigenvalue is not positive.
pub(crate) fn condition_number(m: &DMatrix<f64>) -> f64 {
    let eig = SymmetricEigen::new(m.clone());
    let max = eig.eigenvalues.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = eig.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    if min <= 0.0 || !min.is_finite() {
        f64::INFINITY
    } else {
        max / min
    }
}

pub(crate) fn mean_diagonal(m: &DMatrix<f64>) -> f64 {
    m.trace() / m.nrows() as f64
}

/// Adds `amount * I` in place.
pub(crate) fn add_ridge(m: &mut DMatrix<f64>, amount: f64) {
    for i in 0..m.nrows() {
        m[(i, i)] += amount;
    }
}

pub(crate) fn outer_accumulate(acc: &mut DMatrix<f64>, v: &[f64], weight: f64) {
    let d = v.len();
    for i in 0..d {
        let vi = v[i] * weight;
        for j in 0..d {
            acc[(i, j)] += vi * v[j];
        }
    }
}

pub(crate) fn to_dvector(v: &[f64]) -> DVector<f64> {
    DVector::from_column_slice(v)
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Lexicographic total order on rows; used to fix summation order.
pub(crate) fn sort_rows(rows: &mut Vec<&[f64]>) {
    rows.sort_by(|a, b| {
        a.iter()
            .zip(b.iter())
            .map(|(x, y)| x.total_cmp(y))
            .find(|o| o.is_ne())
            .unwrap_or(core::cmp::Ordering::Equal)
    });
}
