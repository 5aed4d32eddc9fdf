//! The supervised classifier roster and a common fit/predict interface.

pub mod gaussian;
pub mod kernel;
pub mod knn;
pub mod svm;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

pub use gaussian::{fit_gaussian, GaussianMode, GaussianModel};
pub use kernel::{kernel_eval, Kernel, KernelSpec};
pub use knn::{knn_predict, KnnSpec, Metric};
pub use svm::{fit_svm, Solver, SvmConfig, SvmModel};

use crate::dataset::{Class, Dataset};
use crate::error::Result;

/// Something that can be trained on a dataset.
pub trait Learner {
    type Model: Predictor;

    fn fit(&self, train: &Dataset) -> Result<Self::Model>;

    /// Classifier family, e.g. "Discriminant Analysis".
    fn name(&self) -> String;

    /// Variant within the family, e.g. "QDA".
    fn variant(&self) -> String;

    /// Hyperparameters as `key=value` pairs.
    fn params(&self) -> Vec<(String, String)> {
        Vec::new()
    }
}

pub trait Predictor {
    fn predict(&self, x: &[f64]) -> Result<Class>;
}

/// Default ridge for the Gaussian family.
pub const DEFAULT_RIDGE: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "family", rename_all = "lowercase"))]
pub enum ClassifierConfig {
    Gaussian { mode: GaussianMode, ridge: f64 },
    Knn(KnnSpec),
    Svm(SvmConfig),
}

impl ClassifierConfig {
    pub fn gaussian(mode: GaussianMode) -> Self {
        ClassifierConfig::Gaussian {
            mode,
            ridge: DEFAULT_RIDGE,
        }
    }

    /// Every classifier variant with default hyperparameters: five Gaussian
    /// modes, four KNN metrics and four SVM kernels under both solvers.
    pub fn roster() -> Vec<ClassifierConfig> {
        let mut out: Vec<ClassifierConfig> = GaussianMode::ALL.iter().map(|&m| Self::gaussian(m)).collect();
        out.extend(Metric::ALL.iter().map(|&m| ClassifierConfig::Knn(KnnSpec::new(5, m))));
        for solver in [Solver::Smo, Solver::Ls] {
            for kernel in [
                KernelSpec::Linear,
                KernelSpec::Quadratic,
                KernelSpec::polynomial(),
                KernelSpec::rbf(),
            ] {
                out.push(ClassifierConfig::Svm(SvmConfig::new(kernel, solver)));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum TrainedClassifier {
    Gaussian(GaussianModel),
    Knn { train: Dataset, spec: KnnSpec },
    Svm(SvmModel),
}

impl Predictor for TrainedClassifier {
    fn predict(&self, x: &[f64]) -> Result<Class> {
        match self {
            TrainedClassifier::Gaussian(m) => m.predict(x),
            TrainedClassifier::Knn { train, spec } => knn_predict(train, spec, x),
            TrainedClassifier::Svm(m) => m.predict(x).map(|(c, _)| c),
        }
    }
}

fn kernel_label(kernel: &KernelSpec) -> &'static str {
    match kernel {
        KernelSpec::Linear => "Linear Kernel",
        KernelSpec::Quadratic => "Quadratic Kernel",
        KernelSpec::Polynomial { .. } => "Polynomial Kernel",
        KernelSpec::Rbf { .. } => "Rbf Kernel",
    }
}

impl Learner for ClassifierConfig {
    type Model = TrainedClassifier;

    fn fit(&self, train: &Dataset) -> Result<TrainedClassifier> {
        match self {
            ClassifierConfig::Gaussian { mode, ridge } => {
                fit_gaussian(train, *mode, *ridge).map(TrainedClassifier::Gaussian)
            }
            ClassifierConfig::Knn(spec) => {
                if spec.k > train.n_rows() {
                    return Err(crate::Error::KTooLarge {
                        k: spec.k,
                        rows: train.n_rows(),
                    });
                }
                Ok(TrainedClassifier::Knn {
                    train: train.clone(),
                    spec: *spec,
                })
            }
            ClassifierConfig::Svm(cfg) => fit_svm(train, cfg).map(TrainedClassifier::Svm),
        }
    }

    fn name(&self) -> String {
        match self {
            ClassifierConfig::Gaussian {
                mode: GaussianMode::Mahalanobis,
                ..
            } => "Mahalanobis",
            ClassifierConfig::Gaussian { .. } => "Discriminant Analysis",
            ClassifierConfig::Knn(_) => "K-Nearest Neighbor",
            ClassifierConfig::Svm(_) => "Support Vector Machine",
        }
        .to_string()
    }

    fn variant(&self) -> String {
        match self {
            ClassifierConfig::Gaussian { mode, .. } => match mode {
                GaussianMode::Linear => "Linear".to_string(),
                GaussianMode::DiagLinear => "Diaglinear".to_string(),
                GaussianMode::Quadratic => "QDA".to_string(),
                GaussianMode::DiagQuadratic => "Diagquadratic".to_string(),
                GaussianMode::Mahalanobis => "Mahalanobis".to_string(),
            },
            ClassifierConfig::Knn(spec) => {
                let metric = match spec.metric {
                    Metric::Euclidean => "Euclidean",
                    Metric::Cityblock => "Cityblock",
                    Metric::Cosine => "Cosine",
                    Metric::Correlation => "Correlation",
                };
                format!("{metric} k={}", spec.k)
            }
            ClassifierConfig::Svm(cfg) => {
                let solver = match cfg.solver {
                    Solver::Smo => "SMO",
                    Solver::Ls => "LS",
                };
                format!("{} ({solver})", kernel_label(&cfg.kernel))
            }
        }
    }

    fn params(&self) -> Vec<(String, String)> {
        let kv = |k: &str, v: String| (k.to_string(), v);
        match self {
            ClassifierConfig::Gaussian { mode, ridge } => {
                alloc::vec![kv("mode", format!("{mode:?}").to_lowercase()), kv("ridge", format!("{ridge:e}"))]
            }
            ClassifierConfig::Knn(spec) => alloc::vec![
                kv("k", format!("{}", spec.k)),
                kv("metric", format!("{:?}", spec.metric).to_lowercase()),
            ],
            ClassifierConfig::Svm(cfg) => {
                let mut out = alloc::vec![
                    kv("solver", format!("{:?}", cfg.solver).to_lowercase()),
                    kv("c", format!("{:e}", cfg.c)),
                    kv("tol", format!("{:e}", cfg.tol)),
                ];
                match cfg.kernel {
                    KernelSpec::Linear => out.push(kv("kernel", "linear".into())),
                    KernelSpec::Quadratic => out.push(kv("kernel", "quadratic".into())),
                    KernelSpec::Polynomial { degree, coef } => {
                        out.push(kv("kernel", "polynomial".into()));
                        out.push(kv("degree", format!("{degree}")));
                        out.push(kv("coef", format!("{coef:e}")));
                    }
                    KernelSpec::Rbf { gamma } => {
                        out.push(kv("kernel", "rbf".into()));
                        out.push(kv(
                            "gamma",
                            gamma.map_or_else(|| "median".to_string(), |g| format!("{g:e}")),
                        ));
                    }
                }
                out
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn roster_covers_every_variant() {
        let roster = ClassifierConfig::roster();
        assert_eq!(roster.len(), 5 + 4 + 8);
        let mut labels: Vec<(String, String)> = roster.iter().map(|c| (c.name(), c.variant())).collect();
        labels.sort();
        labels.dedup();
        assert_eq!(labels.len(), roster.len());
    }

    #[test]
    fn params_echo_hyperparameters() {
        let c = ClassifierConfig::Svm(SvmConfig::new(KernelSpec::rbf(), Solver::Ls).with_c(2.0));
        let p = c.params();
        assert!(p.contains(&("gamma".to_string(), "median".to_string())));
        assert!(p.contains(&("c".to_string(), "2e0".to_string())));
    }
}
