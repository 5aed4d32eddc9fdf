//! Binary support vector machines trained by SMO or as least-squares SVMs.
//!
//! Class 1 maps to `+1` and class 2 to `-1`. The SMO solver follows the
//! usual LIBSVM formulation: minimize `f(a) = a'Qa/2 - e'a` subject to
//! `0 <= a_i <= C` and `y'a = 0`, picking working pairs by maximal violation
//! with second-order selection of the partner, and stopping once the KKT gap
//! `m(a) - M(a)` drops below `tol`.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::classifiers::kernel::{Kernel, KernelSpec};
use crate::dataset::{Class, Dataset};
use crate::error::{Error, Result};

const TAU: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Solver {
    Smo,
    Ls,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SvmConfig {
    pub kernel: KernelSpec,
    pub solver: Solver,
    /// Box constraint (SMO) or regularization weight (LS).
    pub c: f64,
    pub tol: f64,
    /// SMO iteration cap; `None` means `max(10^7, 100 n)`.
    pub max_iter: Option<usize>,
}

impl SvmConfig {
    pub fn new(kernel: KernelSpec, solver: Solver) -> Self {
        Self {
            kernel,
            solver,
            c: 1.0,
            tol: 1e-3,
            max_iter: None,
        }
    }

    pub fn with_c(mut self, c: f64) -> Self {
        self.c = c;
        self
    }

    pub fn with_tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SvmModel {
    pub kernel: Kernel,
    pub solver: Solver,
    pub c: f64,
    pub support_vectors: Vec<Vec<f64>>,
    /// `alpha_i * y_i` for each support vector.
    pub coefficients: Vec<f64>,
    pub bias: f64,
}

impl SvmModel {
    /// `sum_i alpha_i y_i K(s_i, x) + b`
    pub fn decision(&self, x: &[f64]) -> Result<f64> {
        let d = self.support_vectors.first().map_or(x.len(), |s| s.len());
        if x.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: x.len(),
            });
        }
        Ok(self
            .support_vectors
            .iter()
            .zip(&self.coefficients)
            .map(|(s, a)| a * self.kernel.apply(s, x))
            .sum::<f64>()
            + self.bias)
    }

    /// Predicted class and margin; a zero margin goes to class 1.
    pub fn predict(&self, x: &[f64]) -> Result<(Class, f64)> {
        let m = self.decision(x)?;
        Ok((Class::from_sign(m), m))
    }
}

/// Full SMO solution, for inspection and KKT checks.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoSolution {
    pub alphas: Vec<f64>,
    pub labels: Vec<f64>,
    pub bias: f64,
    pub iterations: usize,
    /// Dual objective `e'a - a'Qa/2` after every iteration, when requested.
    pub objective: Vec<f64>,
}

pub fn fit_svm(train: &Dataset, config: &SvmConfig) -> Result<SvmModel> {
    match config.solver {
        Solver::Smo => fit_smo(train, config, false).map(|(m, _)| m),
        Solver::Ls => fit_ls(train, config),
    }
}

fn validate(config: &SvmConfig) -> Result<()> {
    if !(config.c > 0.0) || !config.c.is_finite() {
        return Err(Error::InvalidParameter("C must be positive".into()));
    }
    if !(config.tol > 0.0) {
        return Err(Error::InvalidParameter("tolerance must be positive".into()));
    }
    Ok(())
}

fn gram(rows: &[&[f64]], kernel: &Kernel) -> DMatrix<f64> {
    let n = rows.len();
    let mut k = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let v = kernel.apply(rows[i], rows[j]);
            k[(i, j)] = v;
            k[(j, i)] = v;
        }
    }
    k
}

/// SMO fit that also returns the raw solution; `trace` records the dual objective.
pub fn fit_smo(train: &Dataset, config: &SvmConfig, trace: bool) -> Result<(SvmModel, SmoSolution)> {
    validate(config)?;
    let kernel = config.kernel.resolve(train);
    let rows: Vec<&[f64]> = train.rows().collect();
    let y: Vec<f64> = train.labels().iter().map(|c| c.sign()).collect();
    let n = rows.len();
    let c = config.c;
    let k = gram(&rows, &kernel);
    let q = |i: usize, j: usize| y[i] * y[j] * k[(i, j)];

    let mut alpha = vec![0.0; n];
    let mut grad = vec![-1.0; n];
    let max_iter = config.max_iter.unwrap_or_else(|| (100 * n).max(10_000_000));
    let mut objective = Vec::new();
    let mut iterations = 0;

    let up = |a: f64, yi: f64| (yi > 0.0 && a < c) || (yi < 0.0 && a > 0.0);
    let low = |a: f64, yi: f64| (yi > 0.0 && a > 0.0) || (yi < 0.0 && a < c);

    loop {
        // i: maximal -y G over the "up" set
        let mut gmax = f64::NEG_INFINITY;
        let mut i_sel = None;
        for t in 0..n {
            if up(alpha[t], y[t]) {
                let v = -y[t] * grad[t];
                if v > gmax {
                    gmax = v;
                    i_sel = Some(t);
                }
            }
        }
        // j: second-order choice over the "low" set; track M for the stopping rule
        let mut gmin = f64::INFINITY;
        let mut best_gain = f64::INFINITY;
        let mut j_sel = None;
        if let Some(i) = i_sel {
            for t in 0..n {
                if !low(alpha[t], y[t]) {
                    continue;
                }
                let v = -y[t] * grad[t];
                gmin = gmin.min(v);
                let b = gmax - v;
                if b > 0.0 {
                    let mut a = k[(i, i)] + k[(t, t)] - 2.0 * k[(i, t)];
                    if a <= 0.0 {
                        a = TAU;
                    }
                    let gain = -(b * b) / a;
                    if gain < best_gain {
                        best_gain = gain;
                        j_sel = Some(t);
                    }
                }
            }
        }
        let (i, j) = match (i_sel, j_sel) {
            (Some(i), Some(j)) if gmax - gmin >= config.tol => (i, j),
            _ => break,
        };
        if iterations >= max_iter {
            return Err(Error::Nonconvergence {
                iterations,
                violation: gmax - gmin,
            });
        }
        iterations += 1;

        let (old_i, old_j) = (alpha[i], alpha[j]);
        if y[i] != y[j] {
            let mut quad = k[(i, i)] + k[(j, j)] + 2.0 * q(i, j);
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (-grad[i] - grad[j]) / quad;
            let diff = alpha[i] - alpha[j];
            alpha[i] += delta;
            alpha[j] += delta;
            if diff > 0.0 {
                if alpha[j] < 0.0 {
                    alpha[j] = 0.0;
                    alpha[i] = diff;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = -diff;
            }
            if diff > 0.0 {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = c - diff;
                }
            } else if alpha[j] > c {
                alpha[j] = c;
                alpha[i] = c + diff;
            }
        } else {
            let mut quad = k[(i, i)] + k[(j, j)] - 2.0 * q(i, j);
            if quad <= 0.0 {
                quad = TAU;
            }
            let delta = (grad[i] - grad[j]) / quad;
            let sum = alpha[i] + alpha[j];
            alpha[i] -= delta;
            alpha[j] += delta;
            if sum > c {
                if alpha[i] > c {
                    alpha[i] = c;
                    alpha[j] = sum - c;
                }
            } else if alpha[j] < 0.0 {
                alpha[j] = 0.0;
                alpha[i] = sum;
            }
            if sum > c {
                if alpha[j] > c {
                    alpha[j] = c;
                    alpha[i] = sum - c;
                }
            } else if alpha[i] < 0.0 {
                alpha[i] = 0.0;
                alpha[j] = sum;
            }
        }

        let di = alpha[i] - old_i;
        let dj = alpha[j] - old_j;
        for t in 0..n {
            grad[t] += q(t, i) * di + q(t, j) * dj;
        }
        if trace {
            let f: f64 = alpha.iter().zip(&grad).map(|(a, g)| a * (g - 1.0)).sum::<f64>() * 0.5;
            objective.push(-f);
        }
    }

    // bias: average over free vectors, else the middle of the feasible interval
    let mut upper = f64::INFINITY;
    let mut lower = f64::NEG_INFINITY;
    let mut free_sum = 0.0;
    let mut free = 0usize;
    for t in 0..n {
        let yg = y[t] * grad[t];
        if alpha[t] >= c {
            if y[t] < 0.0 {
                upper = upper.min(yg);
            } else {
                lower = lower.max(yg);
            }
        } else if alpha[t] <= 0.0 {
            if y[t] > 0.0 {
                upper = upper.min(yg);
            } else {
                lower = lower.max(yg);
            }
        } else {
            free += 1;
            free_sum += yg;
        }
    }
    let rho = if free > 0 {
        free_sum / free as f64
    } else {
        0.5 * (upper + lower)
    };
    let bias = -rho;

    let mut support_vectors = Vec::new();
    let mut coefficients = Vec::new();
    for t in 0..n {
        if alpha[t] > 0.0 {
            support_vectors.push(rows[t].to_vec());
            coefficients.push(alpha[t] * y[t]);
        }
    }
    let model = SvmModel {
        kernel,
        solver: Solver::Smo,
        c,
        support_vectors,
        coefficients,
        bias,
    };
    let solution = SmoSolution {
        alphas: alpha,
        labels: y,
        bias,
        iterations,
        objective,
    };
    Ok((model, solution))
}

/// Least-squares SVM: solves
/// `[0 y'; y Omega + I/C] [b; a] = [0; 1]` with `Omega_ij = y_i y_j K_ij`.
pub fn fit_ls(train: &Dataset, config: &SvmConfig) -> Result<SvmModel> {
    validate(config)?;
    let kernel = config.kernel.resolve(train);
    let rows: Vec<&[f64]> = train.rows().collect();
    let y: Vec<f64> = train.labels().iter().map(|c| c.sign()).collect();
    let n = rows.len();
    let k = gram(&rows, &kernel);
    let mut a = DMatrix::zeros(n + 1, n + 1);
    for i in 0..n {
        a[(0, i + 1)] = y[i];
        a[(i + 1, 0)] = y[i];
        for j in 0..n {
            a[(i + 1, j + 1)] = y[i] * y[j] * k[(i, j)];
        }
        a[(i + 1, i + 1)] += 1.0 / config.c;
    }
    let mut rhs = DVector::from_element(n + 1, 1.0);
    rhs[0] = 0.0;
    let sol = a.lu().solve(&rhs).ok_or(Error::SingularSystem)?;
    if sol.iter().any(|v| !v.is_finite()) {
        return Err(Error::SingularSystem);
    }
    Ok(SvmModel {
        kernel,
        solver: Solver::Ls,
        c: config.c,
        support_vectors: rows.iter().map(|r| r.to_vec()).collect(),
        coefficients: (0..n).map(|i| sol[i + 1] * y[i]).collect(),
        bias: sol[0],
    })
}
