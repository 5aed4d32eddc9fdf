//! CSV and JSON renderings of analysis results. Every file starts with the
//! tool version, seed and config hash.

use serde::Serialize;
use trapframe_core::evaluation::{ComparisonReport, EvalReport, SweepCell};
use trapframe_core::selection::{JCriteria, PcaModel, RankedFeatures, ScreenDecision};
use trapframe_core::Dataset;

use crate::cache::format_value;
use crate::config::RunConfig;

pub const TOOL: &str = "trapframe";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// `#` comment lines carrying version, seed and config hash.
pub fn provenance(cfg: &RunConfig) -> String {
    format!(
        "# {TOOL} {VERSION}\n# seed: {}\n# config_sha256: {}\n",
        cfg.seed,
        cfg.hash()
    )
}

fn csv_text(header: &str, head: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::WriterBuilder::new().from_writer(Vec::new());
    w.write_record(head).expect("in-memory write");
    for r in rows {
        w.write_record(&r).expect("in-memory write");
    }
    let body = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8 input");
    format!("{header}{body}")
}

pub fn rank_csv(cfg: &RunConfig, ranked: &RankedFeatures) -> String {
    let rows = ranked
        .entries()
        .iter()
        .enumerate()
        .map(|(i, e)| vec![(i + 1).to_string(), e.name.clone(), format_value(e.score)])
        .collect();
    csv_text(&provenance(cfg), &["rank", "feature_name", "fdr"], rows)
}

pub fn t_screen_csv(cfg: &RunConfig, decisions: &[ScreenDecision]) -> String {
    let rows = decisions
        .iter()
        .map(|d| {
            vec![
                d.name.clone(),
                d.statistic.map_or_else(String::new, format_value),
                format_value(d.critical),
                d.keep.to_string(),
            ]
        })
        .collect();
    let header = format!("{}# significance: {}\n", provenance(cfg), cfg.significance);
    csv_text(&header, &["feature_name", "t_statistic", "critical_value", "keep"], rows)
}

pub fn j_criteria_csv(cfg: &RunConfig, rows: &[(String, JCriteria)]) -> String {
    let rows = rows
        .iter()
        .map(|(set, j)| {
            vec![
                set.clone(),
                format_value(j.j1),
                format_value(j.j2),
                format_value(j.j3),
                format_value(j.ridge),
            ]
        })
        .collect();
    csv_text(&provenance(cfg), &["feature_set", "j1", "j2", "j3", "ridge"], rows)
}

/// `(feature_i, feature_j, label)` triples for a scatter plot.
pub fn scatter_csv(cfg: &RunConfig, data: &Dataset, labels: &[String], i: usize, j: usize) -> String {
    let names = data.feature_names();
    let rows = data
        .rows()
        .zip(labels)
        .map(|(r, l)| vec![format_value(r[i]), format_value(r[j]), l.clone()])
        .collect();
    csv_text(&provenance(cfg), &[&names[i], &names[j], "label"], rows)
}

pub fn pca_csv(cfg: &RunConfig, model: &PcaModel) -> String {
    let rows = (0..model.dimension())
        .map(|k| {
            vec![
                format!("PC{}", k + 1),
                format_value(model.eigenvalues[k]),
                format_value(model.variance_pct[k]),
                format_value(model.cumulative_pct[k]),
            ]
        })
        .collect();
    csv_text(
        &provenance(cfg),
        &["component", "eigenvalue", "variance_explained_pct", "cumulative_pct"],
        rows,
    )
}

/// One row per feature, one column per component.
pub fn loadings_csv(cfg: &RunConfig, model: &PcaModel) -> String {
    let d = model.dimension();
    let comps: Vec<String> = (1..=d).map(|k| format!("PC{k}")).collect();
    let mut head = vec!["feature"];
    head.extend(comps.iter().map(String::as_str));
    let rows = (0..d)
        .map(|f| {
            let mut r = vec![model.feature_names[f].clone()];
            r.extend((0..d).map(|k| format_value(model.loadings[(f, k)])));
            r
        })
        .collect();
    csv_text(&provenance(cfg), &head, rows)
}

fn fixed(v: f64) -> String {
    format!("{v:.6}")
}

pub fn evaluate_csv(cfg: &RunConfig, cells: &[SweepCell]) -> String {
    let rows = cells
        .iter()
        .map(|c| {
            let (mean, std, status) = match &c.result {
                Ok(r) => (fixed(r.mean), fixed(r.std), "ok".to_string()),
                Err(e) => (String::new(), String::new(), format!("error: {e}")),
            };
            vec![c.classifier.clone(), c.variant.clone(), c.feature_set.clone(), mean, std, status]
        })
        .collect();
    csv_text(
        &provenance(cfg),
        &["classifier", "variant", "feature_set", "mean_mcr", "std_mcr", "status"],
        rows,
    )
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    tool: &'static str,
    version: &'static str,
    seed: u64,
    config_sha256: String,
    config: &'a RunConfig,
    #[serde(flatten)]
    body: T,
}

fn envelope_json<T: Serialize>(cfg: &RunConfig, body: T) -> serde_json::Result<String> {
    let mut s = serde_json::to_string_pretty(&Envelope {
        tool: TOOL,
        version: VERSION,
        seed: cfg.seed,
        config_sha256: cfg.hash(),
        config: cfg,
        body,
    })?;
    s.push('\n');
    Ok(s)
}

#[derive(Serialize)]
struct CellJson<'a> {
    classifier: &'a str,
    variant: &'a str,
    feature_set: &'a str,
    status: &'static str,
    error: Option<String>,
    report: Option<&'a EvalReport>,
}

#[derive(Serialize)]
struct Cells<'a> {
    cells: Vec<CellJson<'a>>,
}

pub fn evaluate_json(cfg: &RunConfig, cells: &[SweepCell]) -> serde_json::Result<String> {
    let cells = cells
        .iter()
        .map(|c| CellJson {
            classifier: &c.classifier,
            variant: &c.variant,
            feature_set: &c.feature_set,
            status: if c.result.is_ok() { "ok" } else { "error" },
            error: c.result.as_ref().err().map(|e| e.to_string()),
            report: c.result.as_ref().ok(),
        })
        .collect();
    envelope_json(cfg, Cells { cells })
}

pub fn compare_csv(cfg: &RunConfig, reports: &[ComparisonReport]) -> String {
    let rows = reports
        .iter()
        .map(|r| {
            vec![
                r.frame.classifier.clone(),
                r.frame.variant.clone(),
                r.frame.feature_set.clone(),
                fixed(r.frame.accuracy()),
                r.baseline.feature_set.clone(),
                fixed(r.baseline.accuracy()),
                fixed(r.accuracy_delta),
            ]
        })
        .collect();
    csv_text(
        &provenance(cfg),
        &[
            "classifier",
            "variant",
            "frame_features",
            "frame_accuracy",
            "baseline_features",
            "baseline_accuracy",
            "accuracy_delta",
        ],
        rows,
    )
}

#[derive(Serialize)]
struct Comparisons<'a> {
    comparisons: &'a [ComparisonReport],
}

pub fn compare_json(cfg: &RunConfig, reports: &[ComparisonReport]) -> serde_json::Result<String> {
    envelope_json(cfg, Comparisons { comparisons: reports })
}
