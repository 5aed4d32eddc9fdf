//! Scatter matrices and the J1/J2/J3 class-separability criteria.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DMatrix;

use crate::dataset::{Class, Dataset};
use crate::error::{Error, Result};
use crate::linalg::{add_ridge, condition_number, outer_accumulate};

/// Default condition number above which the within-class scatter is regularized.
pub const RIDGE_CONDITION: f64 = 1e12;

/// Mean, population (1/n) covariance and prior of one class.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassSummary {
    pub count: usize,
    pub prior: f64,
    pub mean: Vec<f64>,
    pub covariance: DMatrix<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassStats {
    pub classes: Vec<ClassSummary>,
    pub global_mean: Vec<f64>,
}

impl ClassStats {
    /// Statistics for any number of non-empty groups of equal-width rows.
    pub fn from_groups(groups: &[Vec<&[f64]>]) -> Result<Self> {
        let first = groups
            .iter()
            .find_map(|g| g.first())
            .ok_or(Error::Empty)?;
        let d = first.len();
        let total: usize = groups.iter().map(|g| g.len()).sum();
        let mut global = vec![0.0; d];
        let mut classes = Vec::with_capacity(groups.len());
        for rows in groups {
            if rows.is_empty() {
                return Err(Error::Empty);
            }
            let n = rows.len() as f64;
            let mut mean = vec![0.0; d];
            for r in rows {
                if r.len() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        found: r.len(),
                    });
                }
                for (m, x) in mean.iter_mut().zip(r.iter()) {
                    *m += x;
                }
            }
            mean.iter_mut().for_each(|m| *m /= n);
            let mut covariance = DMatrix::zeros(d, d);
            let mut centred = vec![0.0; d];
            for r in rows {
                for ((c, x), m) in centred.iter_mut().zip(r.iter()).zip(&mean) {
                    *c = x - m;
                }
                outer_accumulate(&mut covariance, &centred, 1.0 / n);
            }
            for (g, x) in global.iter_mut().zip(&mean) {
                *g += x * n;
            }
            classes.push(ClassSummary {
                count: rows.len(),
                prior: n / total as f64,
                mean,
                covariance,
            });
        }
        global.iter_mut().for_each(|g| *g /= total as f64);
        Ok(Self {
            classes,
            global_mean: global,
        })
    }

    pub fn from_dataset(data: &Dataset) -> Self {
        let groups: Vec<Vec<&[f64]>> = Class::BOTH
            .iter()
            .map(|&c| data.class_indices(c).into_iter().map(|i| data.row(i)).collect())
            .collect();
        Self::from_groups(&groups).expect("datasets hold both classes")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatterMatrices {
    pub within: DMatrix<f64>,
    pub between: DMatrix<f64>,
    pub mixture: DMatrix<f64>,
}

impl ScatterMatrices {
    /// Within, between and mixture scatter of row groups.
    ///
    /// The mixture matrix is summed directly over all rows about the global
    /// mean rather than as `within + between`.
    pub fn from_groups(groups: &[Vec<&[f64]>]) -> Result<Self> {
        let stats = ClassStats::from_groups(groups)?;
        let d = stats.global_mean.len();
        let total: usize = groups.iter().map(|g| g.len()).sum();
        let mut within = DMatrix::zeros(d, d);
        let mut between = DMatrix::zeros(d, d);
        let mut offset = vec![0.0; d];
        for c in &stats.classes {
            within += &c.covariance * c.prior;
            for ((o, m), g) in offset.iter_mut().zip(&c.mean).zip(&stats.global_mean) {
                *o = m - g;
            }
            outer_accumulate(&mut between, &offset, c.prior);
        }
        let mut mixture = DMatrix::zeros(d, d);
        for rows in groups {
            for r in rows {
                for ((o, x), g) in offset.iter_mut().zip(r.iter()).zip(&stats.global_mean) {
                    *o = x - g;
                }
                outer_accumulate(&mut mixture, &offset, 1.0 / total as f64);
            }
        }
        Ok(Self {
            within,
            between,
            mixture,
        })
    }
}

pub fn scatter_matrices(data: &Dataset) -> ScatterMatrices {
    let groups: Vec<Vec<&[f64]>> = Class::BOTH
        .iter()
        .map(|&c| data.class_indices(c).into_iter().map(|i| data.row(i)).collect())
        .collect();
    ScatterMatrices::from_groups(&groups).expect("datasets hold both classes")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JCriteria {
    /// `trace(S_m) / trace(S_w)`
    pub j1: f64,
    /// `det(S_m) / det(S_w)`
    pub j2: f64,
    /// `trace(S_w^-1 S_m)`
    pub j3: f64,
    /// Ridge added to the diagonal of `S_w` before J2/J3, zero when none was needed.
    pub ridge: f64,
}

/// J criteria with the default ridge threshold.
pub fn j_criteria(scatter: &ScatterMatrices) -> Result<JCriteria> {
    j_criteria_with(scatter, RIDGE_CONDITION)
}

/// J criteria. When the condition number of `S_w` exceeds `ridge_condition`,
/// `1e-8 * trace(S_w) / d` is added to its diagonal before J2 and J3.
pub fn j_criteria_with(scatter: &ScatterMatrices, ridge_condition: f64) -> Result<JCriteria> {
    let sw = &scatter.within;
    let sm = &scatter.mixture;
    let d = sw.nrows();
    let trace_w = sw.trace();
    if !(trace_w > 0.0) {
        return Err(Error::SingularWithinScatter);
    }
    let j1 = sm.trace() / trace_w;

    let mut regular = sw.clone();
    let mut ridge = 0.0;
    if condition_number(sw) > ridge_condition {
        ridge = 1e-8 * trace_w / d as f64;
        add_ridge(&mut regular, ridge);
    }
    let lu = regular.clone().lu();
    let det_w = lu.determinant();
    if !(det_w.abs() > 0.0) || !det_w.is_finite() {
        return Err(Error::SingularWithinScatter);
    }
    let solved = lu.solve(sm).ok_or(Error::SingularWithinScatter)?;
    Ok(JCriteria {
        j1,
        j2: sm.determinant() / det_w,
        j3: solved.trace(),
        ridge,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_groups(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vec<Vec<f64>>> {
        (0..2)
            .map(|c| {
                let n = rng.random_range(5..30);
                (0..n)
                    .map(|_| (0..d).map(|j| c as f64 * (j as f64 + 1.0) + rng.random_range(-1.0..1.0)).collect())
                    .collect()
            })
            .collect()
    }

    fn borrow(groups: &[Vec<Vec<f64>>]) -> Vec<Vec<&[f64]>> {
        groups.iter().map(|g| g.iter().map(|r| r.as_slice()).collect()).collect()
    }

    #[test]
    fn single_class_has_no_between_scatter() {
        let rows = [[1.0, 2.0], [3.0, 1.0], [0.5, 0.0]];
        let groups = vec![rows.iter().map(|r| r.as_slice()).collect::<Vec<_>>()];
        let s = ScatterMatrices::from_groups(&groups).unwrap();
        assert!(s.between.iter().all(|v| v.abs() < 1e-15));
        assert!((&s.mixture - &s.within).abs().max() < 1e-15);
        let j = j_criteria(&s).unwrap();
        assert!((j.j1 - 1.0).abs() < 1e-12);
        assert!((j.j2 - 1.0).abs() < 1e-12);
        assert!((j.j3 - 2.0).abs() < 1e-12);
    }

    #[test]
    fn two_points_in_one_dimension() {
        let a = [[1.0]];
        let b = [[-1.0]];
        let groups = vec![vec![a[0].as_slice()], vec![b[0].as_slice()]];
        let s = ScatterMatrices::from_groups(&groups).unwrap();
        assert_eq!(s.within[(0, 0)], 0.0);
        assert_eq!(s.between[(0, 0)], 1.0);
        assert_eq!(s.mixture[(0, 0)], 1.0);
        assert_eq!(j_criteria(&s), Err(Error::SingularWithinScatter));
    }

    #[test]
    fn scalar_ratios() {
        let s = ScatterMatrices {
            within: DMatrix::from_element(1, 1, 1.0),
            between: DMatrix::from_element(1, 1, 4.0),
            mixture: DMatrix::from_element(1, 1, 5.0),
        };
        let j = j_criteria(&s).unwrap();
        assert_eq!((j.j1, j.j2, j.j3), (5.0, 5.0, 5.0));
        assert_eq!(j.ridge, 0.0);
    }

    #[test]
    fn decomposition_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let g = random_groups(&mut rng, 4);
            let s = ScatterMatrices::from_groups(&borrow(&g)).unwrap();
            let diff = (&s.within + &s.between - &s.mixture).abs().max();
            assert!(diff < 1e-10, "{diff}");
        }
    }

    #[test]
    fn near_singular_within_gets_ridge() {
        // third feature duplicates the first
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let g: Vec<Vec<Vec<f64>>> = random_groups(&mut rng, 2)
            .into_iter()
            .map(|rows| rows.into_iter().map(|r| vec![r[0], r[1], r[0]]).collect())
            .collect();
        let s = ScatterMatrices::from_groups(&borrow(&g)).unwrap();
        let j = j_criteria(&s).unwrap();
        assert!(j.ridge > 0.0);
        assert!(j.j3.is_finite());
    }

    #[test]
    fn j3_invariant_under_linear_maps() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let g = random_groups(&mut rng, 3);
        let base = j_criteria(&ScatterMatrices::from_groups(&borrow(&g)).unwrap()).unwrap();
        for _ in 0..10 {
            let a = DMatrix::<f64>::from_fn(3, 3, |i, j| if i == j { 2.0 } else { 0.0 } + rng.random_range(-1.0..1.0));
            if a.determinant().abs() < 0.1 {
                continue;
            }
            let mapped: Vec<Vec<Vec<f64>>> = g
                .iter()
                .map(|rows| {
                    rows.iter()
                        .map(|r| (&a * DMatrix::from_column_slice(3, 1, r)).iter().copied().collect())
                        .collect()
                })
                .collect();
            let j = j_criteria(&ScatterMatrices::from_groups(&borrow(&mapped)).unwrap()).unwrap();
            assert!((j.j3 - base.j3).abs() <= 1e-8 * base.j3.abs());
            assert!((j.j2 - base.j2).abs() <= 1e-8 * base.j2.abs());
        }
    }
}
