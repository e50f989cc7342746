//! Report payloads and their text, JSON and CSV renderings. Every report
//! carries the tool version and the full [`RunConfig`].

use std::fmt::Write as _;

use heartml_core::classifiers::{Algorithm, HyperParams};
use heartml_core::evaluation::{CvResult, MetricsReport, METRIC_NAMES};
use heartml_core::feature_selection::{RankedList, SubsetSearchResult};
use heartml_core::schema::FeatureKind;
use heartml_core::tuning::{CandidateResult, Comparison, TuneResult};
use serde::{Deserialize, Serialize};

use crate::error::{AppError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub data_path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub keep_features: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub algorithm: Option<Algorithm>,
    pub folds: usize,
    pub seed: u64,
    /// `None` means the per-algorithm default (on for SVM and k-NN).
    pub scaling: Option<bool>,
    pub output_format: OutputFormat,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub evaluator: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub stale_limit: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<HyperParams>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub grid: Option<Vec<HyperParams>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model_path: Option<String>,
}

impl RunConfig {
    pub fn new(command: &str, format: OutputFormat) -> Self {
        RunConfig {
            command: command.to_string(),
            data_path: None,
            keep_features: None,
            algorithm: None,
            folds: 10,
            seed: 2018,
            scaling: None,
            output_format: format,
            output_path: None,
            evaluator: None,
            stale_limit: None,
            params: None,
            grid: None,
            model_path: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub config: RunConfig,
    pub result: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(config: RunConfig, result: T) -> Self {
        Report {
            tool: "heartml",
            version: crate::VERSION,
            config,
            result,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Renders a metric value, with `n/a` for an undefined one.
pub fn fmt_metric(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| format!("{x:.4}"))
}

fn csv_metric(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".to_string(), |x| x.to_string())
}

fn csv_string(rows: Vec<Vec<String>>) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.write_record(&r)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| AppError::Csv(csv::Error::from(e.into_error())))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn push_config(out: &mut String, config: &RunConfig) {
    let _ = write!(out, "# heartml {} {}", crate::VERSION, config.command);
    if matches!(
        config.command.as_str(),
        "subset" | "cv" | "tune" | "compare"
    ) {
        let _ = write!(out, "  folds={} seed={}", config.folds, config.seed);
    }
    if let Some(p) = &config.data_path {
        let _ = write!(out, "  data={p}");
    }
    out.push('\n');
}

// ---- inspect ----

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeatureSummary {
    pub name: String,
    pub kind: FeatureKind,
    pub min: f64,
    pub max: f64,
    pub mean: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InspectSummary {
    pub source: String,
    pub parsed: usize,
    pub dropped: usize,
    pub kept: usize,
    pub negative: usize,
    pub positive: usize,
    pub features: Vec<FeatureSummary>,
}

pub fn inspect_text(r: &Report<InspectSummary>) -> String {
    let s = &r.result;
    let mut out = String::new();
    push_config(&mut out, &r.config);
    let _ = writeln!(out, "source: {}", s.source);
    let _ = writeln!(
        out,
        "{} parsed, {} dropped, {} kept",
        s.parsed, s.dropped, s.kept
    );
    let _ = writeln!(
        out,
        "class balance: {} negative / {} positive",
        s.negative, s.positive
    );
    let _ = writeln!(
        out,
        "{:<14} {:<12} {:>10} {:>10} {:>10}",
        "feature", "kind", "min", "max", "mean"
    );
    for f in &s.features {
        let kind = serde_json::to_value(f.kind).expect("kind serializes");
        let _ = writeln!(
            out,
            "{:<14} {:<12} {:>10} {:>10} {:>10.3}",
            f.name,
            kind.as_str().unwrap_or_default(),
            f.min,
            f.max,
            f.mean
        );
    }
    out
}

pub fn inspect_csv(r: &Report<InspectSummary>) -> Result<String> {
    let mut rows = vec![vec!["feature", "kind", "min", "max", "mean"]
        .into_iter()
        .map(String::from)
        .collect::<Vec<_>>()];
    for f in &r.result.features {
        let kind = serde_json::to_value(f.kind).expect("kind serializes");
        rows.push(vec![
            f.name.clone(),
            kind.as_str().unwrap_or_default().to_string(),
            f.min.to_string(),
            f.max.to_string(),
            f.mean.to_string(),
        ]);
    }
    csv_string(rows)
}

// ---- rank ----

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankSummary {
    pub rankings: Vec<RankedList>,
}

pub fn rank_text(r: &Report<RankSummary>) -> String {
    let mut out = String::new();
    push_config(&mut out, &r.config);
    for list in &r.result.rankings {
        let _ = writeln!(out, "{}", list.evaluator.name());
        let _ = writeln!(out, "  {:<5} {:<14} {:>8}", "rank", "feature", "score");
        for (i, e) in list.entries.iter().enumerate() {
            let _ = writeln!(out, "  {:<5} {:<14} {:>8.4}", i + 1, e.feature, e.score);
        }
    }
    out
}

pub fn rank_csv(r: &Report<RankSummary>) -> Result<String> {
    let mut rows = vec![["evaluator", "rank", "feature", "score"]
        .map(String::from)
        .to_vec()];
    for list in &r.result.rankings {
        for (i, e) in list.entries.iter().enumerate() {
            rows.push(vec![
                list.evaluator.name().to_string(),
                (i + 1).to_string(),
                e.feature.clone(),
                e.score.to_string(),
            ]);
        }
    }
    csv_string(rows)
}

// ---- subset ----

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SubsetSummary {
    pub wrapped: HyperParams,
    #[serde(flatten)]
    pub search: SubsetSearchResult,
    /// Union of both rankers' top 7 and the wrapper subset.
    pub aggregate_selection: Vec<String>,
}

pub fn subset_text(r: &Report<SubsetSummary>) -> String {
    let s = &r.result;
    let mut out = String::new();
    push_config(&mut out, &r.config);
    let _ = writeln!(out, "wrapped: {}", s.wrapped);
    let _ = writeln!(out, "selected: {}", s.search.selected.join(", "));
    let _ = writeln!(out, "objective: {:.4}", s.search.objective);
    let _ = writeln!(out, "expansions: {}", s.search.expansions);
    let _ = writeln!(
        out,
        "aggregate selection: {}",
        s.aggregate_selection.join(", ")
    );
    out
}

pub fn subset_csv(r: &Report<SubsetSummary>) -> Result<String> {
    let s = &r.result;
    csv_string(vec![
        ["selected", "objective", "expansions"]
            .map(String::from)
            .to_vec(),
        vec![
            s.search.selected.join(";"),
            s.search.objective.to_string(),
            s.search.expansions.to_string(),
        ],
    ])
}

// ---- cv ----

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CvSummary {
    pub params: HyperParams,
    pub scaled: bool,
    #[serde(flatten)]
    pub cv: CvResult,
}

fn matrix_cells(m: &MetricsReport) -> [String; 4] {
    let c = m.matrix;
    [c.tp, c.fp, c.tn, c.fn_].map(|v| v.to_string())
}

pub fn cv_text(r: &Report<CvSummary>) -> String {
    let s = &r.result;
    let mut out = String::new();
    push_config(&mut out, &r.config);
    let _ = writeln!(out, "{}  scaled={}", s.params, s.scaled);
    let _ = writeln!(
        out,
        "{:<7} {:>4} {:>4} {:>4} {:>4} {:>9} {:>9} {:>11} {:>9}",
        "fold", "tp", "fp", "tn", "fn", "accuracy", "recall", "specificity", "precision"
    );
    let line = |out: &mut String, name: &str, m: &MetricsReport| {
        let [tp, fp, tn, fn_] = matrix_cells(m);
        let v = m.values().map(fmt_metric);
        let _ = writeln!(
            out,
            "{:<7} {:>4} {:>4} {:>4} {:>4} {:>9} {:>9} {:>11} {:>9}",
            name, tp, fp, tn, fn_, v[0], v[1], v[2], v[3]
        );
    };
    for (i, m) in s.cv.per_fold.iter().enumerate() {
        line(&mut out, &(i + 1).to_string(), m);
    }
    line(&mut out, "pooled", &s.cv.pooled);
    let _ = writeln!(out, "mean accuracy: {:.4}", s.cv.mean_accuracy);
    out
}

pub fn cv_csv(r: &Report<CvSummary>) -> Result<String> {
    let mut header: Vec<String> = ["fold", "tp", "fp", "tn", "fn"].map(String::from).to_vec();
    header.extend(METRIC_NAMES.iter().map(|s| s.to_string()));
    let mut rows = vec![header];
    let mut push = |name: String, m: &MetricsReport| {
        let mut row = vec![name];
        row.extend(matrix_cells(m));
        row.extend(m.values().map(csv_metric));
        rows.push(row);
    };
    for (i, m) in r.result.cv.per_fold.iter().enumerate() {
        push((i + 1).to_string(), m);
    }
    push("pooled".to_string(), &r.result.cv.pooled);
    csv_string(rows)
}

// ---- tune ----

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TuneSummary {
    pub algorithm: Algorithm,
    pub scaled: bool,
    pub fold_fingerprint: u64,
    pub candidates: Vec<CandidateSummary>,
    pub best: HyperParams,
    pub cv: CvResult,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateSummary {
    pub params: HyperParams,
    pub mean_accuracy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl From<&CandidateResult> for CandidateSummary {
    fn from(c: &CandidateResult) -> Self {
        CandidateSummary {
            params: c.params,
            mean_accuracy: c.mean_accuracy,
            error: c.error.clone(),
        }
    }
}

impl From<&TuneResult> for TuneSummary {
    fn from(t: &TuneResult) -> Self {
        TuneSummary {
            algorithm: t.algorithm,
            scaled: t.scaled,
            fold_fingerprint: t.fold_fingerprint,
            candidates: t.candidates.iter().map(CandidateSummary::from).collect(),
            best: t.best,
            cv: t.best_cv.clone(),
        }
    }
}

pub fn tune_text(r: &Report<Vec<TuneSummary>>) -> String {
    let mut out = String::new();
    push_config(&mut out, &r.config);
    for t in &r.result {
        let _ = writeln!(out, "{}  scaled={}", t.algorithm, t.scaled);
        for c in &t.candidates {
            let mark = if c.params == t.best { "*" } else { " " };
            let acc = c.mean_accuracy.map_or_else(
                || c.error.clone().unwrap_or_default(),
                |a| format!("{a:.4}"),
            );
            let _ = writeln!(out, " {mark} {:<48} {acc}", c.params.to_string());
        }
    }
    out
}

pub fn tune_csv(r: &Report<Vec<TuneSummary>>) -> Result<String> {
    let mut rows = vec![["algorithm", "params", "mean_accuracy", "best"]
        .map(String::from)
        .to_vec()];
    for t in &r.result {
        for c in &t.candidates {
            rows.push(vec![
                t.algorithm.to_string(),
                c.params.to_string(),
                csv_metric(c.mean_accuracy),
                (c.params == t.best).to_string(),
            ]);
        }
    }
    csv_string(rows)
}

// ---- compare ----

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareSummary {
    pub fold_fingerprint: u64,
    pub rows: Vec<heartml_core::tuning::ComparisonRow>,
    pub tuning: Vec<TuneSummary>,
}

impl From<&Comparison> for CompareSummary {
    fn from(c: &Comparison) -> Self {
        CompareSummary {
            fold_fingerprint: c.fold_fingerprint,
            rows: c.rows.clone(),
            tuning: c.tuning.iter().map(TuneSummary::from).collect(),
        }
    }
}

pub fn compare_text(r: &Report<CompareSummary>) -> String {
    let mut out = String::new();
    push_config(&mut out, &r.config);
    let _ = writeln!(
        out,
        "{:<5} {:<44} {:>10} {:>10} {:>12} {:>10} {:>10}",
        "model", "best parameters", "accuracy", "recall", "specificity", "precision", "mean acc"
    );
    for row in &r.result.rows {
        let cells: Vec<String> = row
            .metrics
            .values()
            .iter()
            .zip(row.best_on)
            .map(|(v, best)| format!("{}{}", fmt_metric(*v), if best { "*" } else { " " }))
            .collect();
        let _ = writeln!(
            out,
            "{:<5} {:<44} {:>10} {:>10} {:>12} {:>10} {:>10.4}",
            row.algorithm.to_string(),
            row.best.to_string(),
            cells[0],
            cells[1],
            cells[2],
            cells[3],
            row.mean_accuracy
        );
    }
    let _ = writeln!(out, "* best on that metric (pooled over held-out folds)");
    out
}

pub fn compare_csv(r: &Report<CompareSummary>) -> Result<String> {
    let mut header: Vec<String> = ["algorithm", "params"].map(String::from).to_vec();
    header.extend(METRIC_NAMES.iter().map(|s| s.to_string()));
    header.push("mean_accuracy".into());
    header.extend(METRIC_NAMES.iter().map(|s| format!("best_{s}")));
    let mut rows = vec![header];
    for row in &r.result.rows {
        let mut cells = vec![row.algorithm.to_string(), row.best.to_string()];
        cells.extend(row.metrics.values().map(csv_metric));
        cells.push(row.mean_accuracy.to_string());
        cells.extend(row.best_on.map(|b| b.to_string()));
        rows.push(cells);
    }
    csv_string(rows)
}

// ---- predict ----

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prediction {
    pub label: u8,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub posterior: Option<[f64; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PredictSummary {
    pub algorithm: Algorithm,
    pub features: Vec<String>,
    pub predictions: Vec<Prediction>,
}

pub fn predict_text(r: &Report<PredictSummary>) -> String {
    let mut out = String::new();
    for (i, p) in r.result.predictions.iter().enumerate() {
        match p.posterior {
            Some([n, q]) => {
                let _ = writeln!(out, "{}\t{}\tp0={n:.6}\tp1={q:.6}", i + 1, p.label);
            }
            None => {
                let _ = writeln!(out, "{}\t{}", i + 1, p.label);
            }
        }
    }
    out
}

pub fn predict_csv(r: &Report<PredictSummary>) -> Result<String> {
    let mut rows = vec![["record", "label", "p_negative", "p_positive"]
        .map(String::from)
        .to_vec()];
    for (i, p) in r.result.predictions.iter().enumerate() {
        let (a, b) = p
            .posterior
            .map_or((String::new(), String::new()), |[n, q]| {
                (n.to_string(), q.to_string())
            });
        rows.push(vec![(i + 1).to_string(), p.label.to_string(), a, b]);
    }
    csv_string(rows)
}
