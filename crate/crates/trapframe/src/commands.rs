//! The pipeline stages behind each subcommand. Each returns the paths it wrote.

use std::fs;
use std::path::{Path, PathBuf};

use log::{info, warn};
use trapframe_core::selection::{j_criteria_with, rank_features, scatter_matrices, t_screen, fit_pca};
use trapframe_core::Class;

use crate::cache::FeatureTable;
use crate::config::RunConfig;
use crate::error::{AppError, AppResult};
use crate::extract::{extract_corpus, Extraction};
use crate::manifest::parse_manifest;
use crate::pipeline::{par_compare, par_sweep};
use crate::report;

fn write(dir: &Path, name: &str, text: &str) -> AppResult<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| AppError::io(dir, e))?;
    let path = dir.join(name);
    fs::write(&path, text).map_err(|e| AppError::io(&path, e))?;
    Ok(path)
}

fn out_dir(cfg: &RunConfig) -> PathBuf {
    PathBuf::from(&cfg.out_dir)
}

/// Reads the manifest and extracts frame and baseline features for it.
pub fn extract_from_manifest(cfg: &RunConfig) -> AppResult<Extraction> {
    if cfg.manifest.is_empty() {
        return Err(AppError::Usage("no manifest given (set `manifest` or pass --manifest)".into()));
    }
    let path = Path::new(&cfg.manifest);
    let text = fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
    let manifest = parse_manifest(&text).map_err(|source| AppError::Manifest {
        path: cfg.manifest.clone(),
        source,
    })?;
    let base = path.parent().unwrap_or(Path::new("."));
    let extraction = extract_corpus(&manifest, base, cfg)?;
    info!(
        "extracted {} of {} files ({} skipped)",
        extraction.frame.paths.len(),
        manifest.len(),
        extraction.skipped.len()
    );
    Ok(extraction)
}

/// The 24-feature table, from the cache if configured, else by extraction.
pub fn frame_table(cfg: &RunConfig) -> AppResult<FeatureTable> {
    if cfg.features_cache.is_empty() {
        Ok(extract_from_manifest(cfg)?.frame)
    } else {
        FeatureTable::load(Path::new(&cfg.features_cache))
    }
}

pub fn extract(cfg: &RunConfig, baseline: bool) -> AppResult<Vec<PathBuf>> {
    let ex = extract_from_manifest(cfg)?;
    let dir = out_dir(cfg);
    let header = |kind: &str| {
        format!(
            "{}# features: {kind}\n# rows: {}\n# skipped: {}\n",
            report::provenance(cfg),
            ex.frame.paths.len(),
            ex.skipped.len()
        )
    };
    let mut written = vec![write(&dir, "features.csv", &ex.frame.write_csv(&header("frame")))?];
    if baseline {
        written.push(write(&dir, "baseline.csv", &ex.baseline.write_csv(&header("baseline")))?);
    }
    println!(
        "extracted {} clips, skipped {}",
        ex.frame.paths.len(),
        ex.skipped.len()
    );
    for (path, why) in &ex.skipped {
        println!("  skipped {path}: {why}");
    }
    Ok(written)
}

pub fn rank(cfg: &RunConfig) -> AppResult<Vec<PathBuf>> {
    let table = frame_table(cfg)?;
    let data = &table.data;
    let dir = out_dir(cfg);
    let ranked = rank_features(data);
    let mut written = vec![write(&dir, "rank.csv", &report::rank_csv(cfg, &ranked))?];

    if data.class_count(Class::One) == data.class_count(Class::Two) {
        let decisions = t_screen(data, cfg.significance)?;
        written.push(write(&dir, "t_screen.csv", &report::t_screen_csv(cfg, &decisions))?);
    } else {
        warn!("t screen skipped: it needs equally sized classes");
    }

    let mut j_rows = Vec::new();
    for &k in cfg.fdr_sizes.iter().filter(|&&k| k <= data.n_features()) {
        let subset = data.select_columns(&ranked.top_indices(k)?)?;
        let label = if k == data.n_features() { format!("All {k}") } else { format!("Top {k}") };
        j_rows.push((label, j_criteria_with(&scatter_matrices(&subset), cfg.ridge_condition)?));
    }
    written.push(write(&dir, "j_criteria.csv", &report::j_criteria_csv(cfg, &j_rows))?);

    for pair in &cfg.scatter_pairs {
        let (a, b) = cfg.scatter_pair(pair)?;
        let (i, j) = (data.feature_index(&a)?, data.feature_index(&b)?);
        let name = format!("scatter_{a}_{b}.csv");
        written.push(write(&dir, &name, &report::scatter_csv(cfg, data, &table.labels, i, j))?);
    }

    for (i, e) in ranked.entries().iter().enumerate() {
        println!("{:>3}  {:<18} {:.6}", i + 1, e.name, e.score);
    }
    Ok(written)
}

pub fn pca(cfg: &RunConfig) -> AppResult<Vec<PathBuf>> {
    let table = frame_table(cfg)?;
    let model = fit_pca(&table.data)?;
    let dir = out_dir(cfg);
    let written = vec![
        write(&dir, "pca.csv", &report::pca_csv(cfg, &model))?,
        write(&dir, "pca_loadings.csv", &report::loadings_csv(cfg, &model))?,
    ];
    for k in 0..model.dimension() {
        println!(
            "PC{:<3} {:>12.6} {:>8.3}% {:>8.3}%",
            k + 1,
            model.eigenvalues[k],
            model.variance_pct[k],
            model.cumulative_pct[k]
        );
    }
    Ok(written)
}

pub fn evaluate(cfg: &RunConfig) -> AppResult<Vec<PathBuf>> {
    let table = frame_table(cfg)?;
    let learners = cfg.classifier_list(&cfg.classifiers)?;
    let selectors = cfg.selectors_for(table.data.feature_names())?;
    if selectors.is_empty() {
        return Err(AppError::Usage("no feature set fits the available features".into()));
    }
    let cells = par_sweep(&table.data, &learners, &selectors, &cfg.cv());
    let dir = out_dir(cfg);
    let written = vec![
        write(&dir, "evaluate.csv", &report::evaluate_csv(cfg, &cells))?,
        write(&dir, "evaluate.json", &report::evaluate_json(cfg, &cells)?)?,
    ];
    for c in &cells {
        match &c.result {
            Ok(r) => println!("{:<24} {:<28} {:<10} {:.4} ± {:.4}", c.classifier, c.variant, c.feature_set, r.mean, r.std),
            Err(e) => println!("{:<24} {:<28} {:<10} failed: {e}", c.classifier, c.variant, c.feature_set),
        }
    }
    let failed = cells.iter().filter(|c| c.result.is_err()).count();
    if failed > 0 {
        return Err(AppError::FailedCells {
            failed,
            total: cells.len(),
        });
    }
    Ok(written)
}

pub fn compare(cfg: &RunConfig) -> AppResult<Vec<PathBuf>> {
    let (frame, baseline) = if cfg.features_cache.is_empty() || cfg.baseline_cache.is_empty() {
        let ex = extract_from_manifest(cfg)?;
        (ex.frame, ex.baseline)
    } else {
        let f = FeatureTable::load(Path::new(&cfg.features_cache))?;
        let b = FeatureTable::load(Path::new(&cfg.baseline_cache))?;
        if f.paths != b.paths {
            return Err(AppError::Usage("feature and baseline caches list different clips".into()));
        }
        (f, b)
    };
    let mut reports = Vec::new();
    for learner in cfg.classifier_list(&cfg.compare_classifiers)? {
        reports.push(par_compare(&frame.data, &baseline.data, &learner, &cfg.cv())?);
    }
    let dir = out_dir(cfg);
    let written = vec![
        write(&dir, "compare.csv", &report::compare_csv(cfg, &reports))?,
        write(&dir, "compare.json", &report::compare_json(cfg, &reports)?)?,
    ];
    for r in &reports {
        println!(
            "{:<24} {:<20} frame {:.4}  baseline {:.4}  delta {:+.4}",
            r.frame.classifier,
            r.frame.variant,
            r.frame.accuracy(),
            r.baseline.accuracy(),
            r.accuracy_delta
        );
    }
    Ok(written)
}
