//! Feature screening, ranking and transformation.
//!
//! * [`screen`]: two-sample t statistic and significance screening.
//! * [`fdr`]: Fisher Discriminant Ratio scores and rankings.
//! * [`scatter`]: within/between/mixture scatter matrices and the J criteria.
//! * [`pca`]: principal components on z-scored features.
//! * [`sfs`]: sequential forward selection.

pub mod fdr;
pub mod pca;
pub mod scatter;
pub mod screen;
pub mod sfs;

pub use fdr::{fdr_score, rank_features, RankedFeature, RankedFeatures};
pub use pca::{fit_pca, PcaModel};
pub use scatter::{j_criteria, j_criteria_with, scatter_matrices, ClassStats, JCriteria, ScatterMatrices};
pub use screen::{t_screen, t_statistic, ScreenDecision};
pub use sfs::{sfs, SfsStep, SfsTrace};
