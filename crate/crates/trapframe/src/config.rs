//! Flat TOML run configuration. Every key has a default; unknown keys are
//! rejected; command-line flags are applied on top of the file.

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use trapframe_core::classifiers::{ClassifierConfig, GaussianMode, KernelSpec, KnnSpec, Metric, Solver, SvmConfig};
use trapframe_core::evaluation::{CvConfig, FeatureSelector};
use trapframe_core::features::FeatureConfig;
use trapframe_core::spectral::WelchConfig;

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Read { path: String, source: std::io::Error },
    #[error("invalid config: {0}")]
    Toml(#[from] toml::de::Error),
    #[error("invalid override `{0}`: expected key=value")]
    Override(String),
    #[error("invalid value for `{key}`: {message}")]
    Value { key: &'static str, message: String },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub manifest: String,
    pub features_cache: String,
    pub baseline_cache: String,
    pub out_dir: String,
    pub seed: u64,
    pub opening_fraction: f64,
    pub closing_fraction: f64,
    pub min_frame_len: usize,
    pub psd_segment_len: usize,
    pub psd_overlap: f64,
    pub iterations: usize,
    pub test_fraction: f64,
    pub stratified: bool,
    pub selectors: String,
    pub fdr_sizes: Vec<usize>,
    pub pca_sizes: Vec<usize>,
    pub explicit_features: Vec<String>,
    pub classifiers: Vec<String>,
    pub compare_classifiers: Vec<String>,
    pub knn_k: usize,
    pub gaussian_ridge: f64,
    pub svm_c: f64,
    pub svm_tol: f64,
    pub svm_max_iter: usize,
    pub poly_degree: u32,
    pub poly_coef: f64,
    pub rbf_gamma: f64,
    pub significance: f64,
    pub ridge_condition: f64,
    pub scatter_pairs: Vec<String>,
    pub threads: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            manifest: String::new(),
            features_cache: String::new(),
            baseline_cache: String::new(),
            out_dir: "out".into(),
            seed: 0,
            opening_fraction: 0.05,
            closing_fraction: 0.05,
            min_frame_len: 8,
            psd_segment_len: 1024,
            psd_overlap: 0.5,
            iterations: 500,
            test_fraction: 0.2,
            stratified: true,
            selectors: "both".into(),
            fdr_sizes: vec![2, 6, 9, 19, 22, 24],
            pca_sizes: vec![5, 7, 9, 11, 13, 24],
            explicit_features: Vec::new(),
            classifiers: vec!["all".into()],
            compare_classifiers: vec!["quadratic".into(), "svm-rbf-smo".into()],
            knn_k: 5,
            gaussian_ridge: 1e-6,
            svm_c: 1.0,
            svm_tol: 1e-3,
            svm_max_iter: 0,
            poly_degree: 3,
            poly_coef: 1.0,
            rbf_gamma: 0.0,
            significance: 0.05,
            ridge_condition: 1e12,
            scatter_pairs: Vec::new(),
            threads: 0,
        }
    }
}

/// One documented key: name, TOML type and meaning.
pub struct KeyDoc {
    pub key: &'static str,
    pub kind: &'static str,
    pub help: &'static str,
}

pub const KEYS: &[KeyDoc] = &[
    KeyDoc { key: "manifest", kind: "string", help: "CSV of `path,label` rows; relative paths resolve against its directory" },
    KeyDoc { key: "features_cache", kind: "string", help: "24-feature cache to read instead of extracting from the manifest" },
    KeyDoc { key: "baseline_cache", kind: "string", help: "8-feature whole-signal cache used by `compare`" },
    KeyDoc { key: "out_dir", kind: "string", help: "directory receiving every output file" },
    KeyDoc { key: "seed", kind: "integer", help: "RNG seed for splits (0 to 2^63-1)" },
    KeyDoc { key: "opening_fraction", kind: "float", help: "share of samples in the opening frame" },
    KeyDoc { key: "closing_fraction", kind: "float", help: "share of samples in the closing frame" },
    KeyDoc { key: "min_frame_len", kind: "integer", help: "shortest frame accepted for feature extraction" },
    KeyDoc { key: "psd_segment_len", kind: "integer", help: "Welch segment length (capped at the frame length)" },
    KeyDoc { key: "psd_overlap", kind: "float", help: "Welch segment overlap in [0, 1)" },
    KeyDoc { key: "iterations", kind: "integer", help: "Monte Carlo cross-validation iterations" },
    KeyDoc { key: "test_fraction", kind: "float", help: "held-out share per iteration, in (0, 1)" },
    KeyDoc { key: "stratified", kind: "bool", help: "keep class proportions in every split" },
    KeyDoc { key: "selectors", kind: "string", help: "feature sets for `evaluate`: fdr, pca, both or explicit" },
    KeyDoc { key: "fdr_sizes", kind: "integer array", help: "top-k FDR prefix sizes" },
    KeyDoc { key: "pca_sizes", kind: "integer array", help: "principal component counts" },
    KeyDoc { key: "explicit_features", kind: "string array", help: "feature names used when selectors = \"explicit\"" },
    KeyDoc { key: "classifiers", kind: "string array", help: "classifiers for `evaluate` (see below); \"all\" expands to the full roster" },
    KeyDoc { key: "compare_classifiers", kind: "string array", help: "classifiers for `compare`" },
    KeyDoc { key: "knn_k", kind: "integer", help: "neighbours for every KNN variant" },
    KeyDoc { key: "gaussian_ridge", kind: "float", help: "ridge factor for ill-conditioned Gaussian covariances" },
    KeyDoc { key: "svm_c", kind: "float", help: "SVM box constraint / LS-SVM regularization" },
    KeyDoc { key: "svm_tol", kind: "float", help: "SMO stopping tolerance" },
    KeyDoc { key: "svm_max_iter", kind: "integer", help: "SMO iteration cap, 0 for automatic" },
    KeyDoc { key: "poly_degree", kind: "integer", help: "polynomial kernel degree" },
    KeyDoc { key: "poly_coef", kind: "float", help: "polynomial kernel offset" },
    KeyDoc { key: "rbf_gamma", kind: "float", help: "RBF width, 0 for the median heuristic" },
    KeyDoc { key: "significance", kind: "float", help: "two-sided level of the t screen written by `rank`" },
    KeyDoc { key: "ridge_condition", kind: "float", help: "condition number above which S_w is ridged for J3" },
    KeyDoc { key: "scatter_pairs", kind: "string array", help: "feature pairs `A:B` exported as scatter data by `rank`" },
    KeyDoc { key: "threads", kind: "integer", help: "worker threads, 0 for one per core (results do not depend on it)" },
];

/// Classifier names accepted in `classifiers` and `compare_classifiers`.
pub const CLASSIFIER_NAMES: &[&str] = &[
    "linear",
    "diaglinear",
    "quadratic",
    "diagquadratic",
    "mahalanobis",
    "knn-euclidean",
    "knn-cityblock",
    "knn-cosine",
    "knn-correlation",
    "svm-linear-smo",
    "svm-quadratic-smo",
    "svm-polynomial-smo",
    "svm-rbf-smo",
    "svm-linear-ls",
    "svm-quadratic-ls",
    "svm-polynomial-ls",
    "svm-rbf-ls",
];

/// Parses `key=value`; the value is read as TOML, falling back to a bare string.
pub fn parse_override(text: &str) -> Result<(String, toml::Value), ConfigError> {
    let (key, value) = text.split_once('=').ok_or_else(|| ConfigError::Override(text.to_string()))?;
    let key = key.trim();
    if key.is_empty() {
        return Err(ConfigError::Override(text.to_string()));
    }
    let value = value.trim();
    let parsed = match format!("v = {value}").parse::<toml::Table>() {
        Ok(mut t) => t.remove("v").expect("key present"),
        Err(_) => toml::Value::String(value.to_string()),
    };
    Ok((key.to_string(), parsed))
}

/// `--help` text listing every key with its default.
pub fn key_help() -> String {
    let defaults = toml::Table::try_from(RunConfig::default()).expect("default config serializes");
    let mut out = String::from("Config keys (TOML, flat; `--set key=value` overrides any of them):\n");
    for doc in KEYS {
        let default = defaults.get(doc.key).map_or_else(|| "\"\"".to_string(), |v| v.to_string());
        let _ = writeln!(out, "  {:<20} {:<13} default {:<28} {}", doc.key, doc.kind, default, doc.help);
    }
    let _ = writeln!(out, "\nClassifier names: all, {}", CLASSIFIER_NAMES.join(", "));
    out
}

fn bad(key: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError::Value {
        key,
        message: message.into(),
    }
}

impl RunConfig {
    /// Defaults, then the file (if any), then overrides in order.
    pub fn load(file: Option<&Path>, overrides: &[(String, toml::Value)]) -> Result<Self, ConfigError> {
        let mut table = toml::Table::try_from(RunConfig::default()).expect("default config serializes");
        if let Some(path) = file {
            let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Read {
                path: path.display().to_string(),
                source,
            })?;
            let parsed: toml::Table = text.parse()?;
            table.extend(parsed);
        }
        for (key, value) in overrides {
            table.insert(key.clone(), value.clone());
        }
        let cfg: RunConfig = table.try_into()?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.opening_fraction > 0.0 && self.closing_fraction > 0.0 && self.opening_fraction + self.closing_fraction < 1.0)
        {
            return Err(bad("opening_fraction", "fractions must be positive and sum below 1"));
        }
        if self.seed > i64::MAX as u64 {
            return Err(bad("seed", "must fit in 63 bits"));
        }
        self.welch().validate().map_err(|e| bad("psd_segment_len", e.to_string()))?;
        self.cv().validate().map_err(|e| bad("iterations", e.to_string()))?;
        if !matches!(self.selectors.as_str(), "fdr" | "pca" | "both" | "explicit") {
            return Err(bad("selectors", "expected fdr, pca, both or explicit"));
        }
        if self.fdr_sizes.iter().chain(&self.pca_sizes).any(|&k| k == 0) {
            return Err(bad("fdr_sizes", "sizes must be at least 1"));
        }
        if self.selectors == "explicit" && self.explicit_features.is_empty() {
            return Err(bad("explicit_features", "required when selectors = \"explicit\""));
        }
        if self.knn_k == 0 {
            return Err(bad("knn_k", "must be at least 1"));
        }
        if !(self.svm_c > 0.0 && self.svm_tol > 0.0) {
            return Err(bad("svm_c", "svm_c and svm_tol must be positive"));
        }
        if !(self.rbf_gamma >= 0.0 && self.gaussian_ridge >= 0.0) {
            return Err(bad("rbf_gamma", "rbf_gamma and gaussian_ridge must be non-negative"));
        }
        if !(self.significance > 0.0 && self.significance < 1.0) {
            return Err(bad("significance", "must lie in (0, 1)"));
        }
        self.classifier_list(&self.classifiers)?;
        self.classifier_list(&self.compare_classifiers)?;
        for pair in &self.scatter_pairs {
            self.scatter_pair(pair)?;
        }
        Ok(())
    }

    pub fn feature_config(&self) -> FeatureConfig {
        FeatureConfig {
            min_frame_len: self.min_frame_len,
            welch: self.welch(),
        }
    }

    fn welch(&self) -> WelchConfig {
        WelchConfig {
            segment_len: self.psd_segment_len,
            overlap: self.psd_overlap,
        }
    }

    pub fn cv(&self) -> CvConfig {
        CvConfig {
            iterations: self.iterations,
            test_fraction: self.test_fraction,
            stratified: self.stratified,
            seed: self.seed,
        }
    }

    pub fn scatter_pair(&self, pair: &str) -> Result<(String, String), ConfigError> {
        let (a, b) = pair
            .split_once(':')
            .ok_or_else(|| bad("scatter_pairs", format!("`{pair}` is not of the form A:B")))?;
        Ok((a.trim().to_string(), b.trim().to_string()))
    }

    fn svm(&self, kernel: KernelSpec, solver: Solver) -> ClassifierConfig {
        let mut cfg = SvmConfig::new(kernel, solver).with_c(self.svm_c).with_tol(self.svm_tol);
        cfg.max_iter = (self.svm_max_iter > 0).then_some(self.svm_max_iter);
        ClassifierConfig::Svm(cfg)
    }

    pub fn classifier(&self, name: &str) -> Result<ClassifierConfig, ConfigError> {
        let gaussian = |mode| ClassifierConfig::Gaussian {
            mode,
            ridge: self.gaussian_ridge,
        };
        let knn = |metric| ClassifierConfig::Knn(KnnSpec::new(self.knn_k, metric));
        let poly = KernelSpec::Polynomial {
            degree: self.poly_degree,
            coef: self.poly_coef,
        };
        let rbf = KernelSpec::Rbf {
            gamma: (self.rbf_gamma > 0.0).then_some(self.rbf_gamma),
        };
        Ok(match name {
            "linear" => gaussian(GaussianMode::Linear),
            "diaglinear" => gaussian(GaussianMode::DiagLinear),
            "quadratic" => gaussian(GaussianMode::Quadratic),
            "diagquadratic" => gaussian(GaussianMode::DiagQuadratic),
            "mahalanobis" => gaussian(GaussianMode::Mahalanobis),
            "knn-euclidean" => knn(Metric::Euclidean),
            "knn-cityblock" => knn(Metric::Cityblock),
            "knn-cosine" => knn(Metric::Cosine),
            "knn-correlation" => knn(Metric::Correlation),
            "svm-linear-smo" => self.svm(KernelSpec::Linear, Solver::Smo),
            "svm-quadratic-smo" => self.svm(KernelSpec::Quadratic, Solver::Smo),
            "svm-polynomial-smo" => self.svm(poly, Solver::Smo),
            "svm-rbf-smo" => self.svm(rbf, Solver::Smo),
            "svm-linear-ls" => self.svm(KernelSpec::Linear, Solver::Ls),
            "svm-quadratic-ls" => self.svm(KernelSpec::Quadratic, Solver::Ls),
            "svm-polynomial-ls" => self.svm(poly, Solver::Ls),
            "svm-rbf-ls" => self.svm(rbf, Solver::Ls),
            other => return Err(bad("classifiers", format!("unknown classifier `{other}`"))),
        })
    }

    /// Expands a name list (with "all") into classifier configs, in order.
    pub fn classifier_list(&self, names: &[String]) -> Result<Vec<ClassifierConfig>, ConfigError> {
        if names.is_empty() {
            return Err(bad("classifiers", "list is empty"));
        }
        let mut out = Vec::new();
        for name in names {
            if name == "all" {
                for n in CLASSIFIER_NAMES {
                    out.push(self.classifier(n)?);
                }
            } else {
                out.push(self.classifier(name)?);
            }
        }
        Ok(out)
    }

    /// Feature sets for `evaluate`, limited to what `n_features` columns allow.
    pub fn selectors_for(&self, names: &[String]) -> Result<Vec<FeatureSelector>, ConfigError> {
        let n = names.len();
        let fdr = self.fdr_sizes.iter().filter(|&&k| k <= n).map(|&k| FeatureSelector::RankedPrefix(k));
        let pca = self.pca_sizes.iter().filter(|&&k| k <= n).map(|&k| FeatureSelector::PcPrefix(k));
        Ok(match self.selectors.as_str() {
            "fdr" => fdr.collect(),
            "pca" => pca.collect(),
            "both" => fdr.chain(pca).collect(),
            _ => {
                let cols = self
                    .explicit_features
                    .iter()
                    .map(|f| {
                        names
                            .iter()
                            .position(|n| n == f)
                            .ok_or_else(|| bad("explicit_features", format!("unknown feature `{f}`")))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                vec![FeatureSelector::Explicit(cols)]
            }
        })
    }

    /// TOML of the effective config.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    /// SHA-256 over every setting that can change a result. Paths and the
    /// thread count are left out so relocated or re-threaded runs hash alike.
    pub fn hash(&self) -> String {
        let mut c = self.clone();
        c.manifest.clear();
        c.features_cache.clear();
        c.baseline_cache.clear();
        c.out_dir.clear();
        c.threads = 0;
        let digest = Sha256::digest(c.to_toml().as_bytes());
        digest.iter().fold(String::new(), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
    }
}
