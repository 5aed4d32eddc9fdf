//! Two-sample t screening of individual features.

use alloc::string::String;
use alloc::vec::Vec;

use crate::dataset::{Class, Dataset};
use crate::error::{Error, Result};
use crate::stats::{mean, sample_variance, two_sided_critical};

/// Pooled two-sample statistic `q = (mean(x) - mean(y)) / (s * sqrt(2/N))`
/// with `s^2 = (var(x) + var(y)) / 2` from unbiased sample variances.
pub fn t_statistic(xs: &[f64], ys: &[f64]) -> Result<f64> {
    if xs.len() != ys.len() {
        return Err(Error::UnequalLengths {
            left: xs.len(),
            right: ys.len(),
        });
    }
    if xs.len() < 2 {
        return Err(Error::FrameTooShort {
            len: xs.len(),
            min: 2,
        });
    }
    let pooled = 0.5 * (sample_variance(xs) + sample_variance(ys));
    if !(pooled > 0.0) {
        return Err(Error::ZeroPooledVariance);
    }
    let n = xs.len() as f64;
    Ok((mean(xs) - mean(ys)) / (libm::sqrt(pooled) * libm::sqrt(2.0 / n)))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScreenDecision {
    pub name: String,
    /// `None` when the statistic is undefined (constant feature in both classes).
    pub statistic: Option<f64>,
    pub critical: f64,
    pub keep: bool,
}

/// Keeps a feature when `|q|` exceeds the two-sided Student-t critical value
/// with `2N - 2` degrees of freedom. Requires equally sized classes.
pub fn t_screen(data: &Dataset, significance: f64) -> Result<Vec<ScreenDecision>> {
    let n1 = data.class_count(Class::One);
    let n2 = data.class_count(Class::Two);
    if n1 != n2 {
        return Err(Error::UnequalLengths { left: n1, right: n2 });
    }
    let critical = two_sided_critical(significance, (2 * n1 - 2) as f64)?;
    (0..data.n_features())
        .map(|j| {
            let xs = data.class_column(Class::One, j);
            let ys = data.class_column(Class::Two, j);
            let statistic = match t_statistic(&xs, &ys) {
                Ok(q) => Some(q),
                Err(Error::ZeroPooledVariance) => None,
                Err(e) => return Err(e),
            };
            Ok(ScreenDecision {
                name: data.feature_names()[j].clone(),
                statistic,
                critical,
                keep: statistic.is_some_and(|q| q.abs() > critical),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    #[test]
    fn textbook_pooled_t() {
        let q = t_statistic(&[1.0, 2.0, 3.0], &[4.0, 5.0, 6.0]).unwrap();
        assert!((q - (-3.0 / (2.0f64 / 3.0).sqrt())).abs() < 1e-12);
        assert!((q + 3.674).abs() < 1e-3);
    }

    #[test]
    fn identical_samples_give_zero() {
        let x = [0.3, -1.2, 4.0, 2.2];
        assert_eq!(t_statistic(&x, &x).unwrap(), 0.0);
    }

    #[test]
    fn degenerate_inputs() {
        assert_eq!(t_statistic(&[0.0; 4], &[1.0; 4]), Err(Error::ZeroPooledVariance));
        assert!(matches!(
            t_statistic(&[0.0; 4], &[1.0; 3]),
            Err(Error::UnequalLengths { .. })
        ));
    }

    #[test]
    fn screening_keeps_separated_feature() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let n = 50;
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for class in [Class::One, Class::Two] {
            let centre = if class == Class::One { 5.0 } else { -5.0 };
            let sep = Normal::new(centre, 1.0).unwrap();
            let noise = Normal::new(0.0, 1.0).unwrap();
            for _ in 0..n {
                rows.push([sep.sample(&mut rng), noise.sample(&mut rng), 7.0]);
                labels.push(class);
            }
        }
        let data = Dataset::from_rows(&["sep", "noise", "flat"], &rows, labels).unwrap();
        let out = t_screen(&data, 0.01).unwrap();
        assert!(out[0].keep);
        assert!(out[0].statistic.unwrap() > 30.0);
        assert!(!out[2].keep);
        assert_eq!(out[2].statistic, None);
        let expected = two_sided_critical(0.01, 98.0).unwrap();
        assert_eq!(out[1].critical, expected);
    }

    #[test]
    fn screening_rejects_unbalanced_classes() {
        let data = Dataset::from_rows(
            &["a"],
            &[[1.0], [2.0], [3.0], [4.0], [5.0]],
            vec![Class::One, Class::One, Class::Two, Class::Two, Class::Two],
        )
        .unwrap();
        assert!(t_screen(&data, 0.05).is_err());
    }
}
