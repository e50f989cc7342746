//! Grid search by cross-validated accuracy, full-data refit, and the
//! three-way model comparison.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::classifiers::{Algorithm, HyperParams, TrainedModel};
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::evaluation::{
    cross_validate_with_folds, stratified_folds, CvResult, FoldAssignment, MetricsReport,
};

/// RBF width used for every SVM candidate in the default grid.
pub const DEFAULT_SIGMA: f64 = 0.1268408;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub algorithm: Algorithm,
    pub candidates: Vec<HyperParams>,
}

impl Grid {
    /// Non-empty, single-algorithm candidate list in declaration order.
    pub fn new(candidates: Vec<HyperParams>) -> Result<Grid> {
        let first = candidates.first().ok_or(Error::EmptyGrid)?;
        let algorithm = first.algorithm();
        if candidates.iter().any(|c| c.algorithm() != algorithm) {
            return Err(Error::MixedGrid);
        }
        for c in &candidates {
            c.validate()?;
        }
        Ok(Grid {
            algorithm,
            candidates,
        })
    }

    pub fn len(&self) -> usize {
        self.candidates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.candidates.is_empty()
    }
}

pub fn default_grid(algorithm: Algorithm) -> Grid {
    let candidates = match algorithm {
        Algorithm::Svm => [0.25, 0.5, 1.0]
            .iter()
            .map(|&c| HyperParams::Svm {
                c,
                sigma: DEFAULT_SIGMA,
            })
            .collect(),
        Algorithm::Knn => [5, 7, 9].iter().map(|&k| HyperParams::Knn { k }).collect(),
        Algorithm::NaiveBayes => [true, false]
            .iter()
            .map(|&use_kernel_density| HyperParams::NaiveBayes {
                use_kernel_density,
                laplace: 0.0,
                bandwidth_adjust: 1.0,
            })
            .collect(),
    };
    Grid {
        algorithm,
        candidates,
    }
}

/// SVM, k-NN and naive Bayes grids, in that order.
pub fn default_grids() -> Vec<Grid> {
    Algorithm::ALL.iter().map(|&a| default_grid(a)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CandidateResult {
    pub params: HyperParams,
    pub mean_accuracy: Option<f64>,
    pub cv: Option<CvResult>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TuneResult {
    pub algorithm: Algorithm,
    pub scaled: bool,
    pub fold_fingerprint: u64,
    pub candidates: Vec<CandidateResult>,
    pub best_index: usize,
    pub best: HyperParams,
    pub best_cv: CvResult,
    pub final_model: TrainedModel,
}

impl TuneResult {
    pub fn best_accuracy(&self) -> f64 {
        self.best_cv.mean_accuracy
    }
}

pub fn grid_search(
    ds: &Dataset,
    grid: &Grid,
    k: usize,
    seed: u64,
    scale: bool,
) -> Result<TuneResult> {
    let folds = stratified_folds(&ds.labels(), k, seed)?;
    grid_search_with_folds(ds, grid, &folds, scale)
}

/// Evaluates every candidate on the same folds, keeps the highest mean
/// accuracy (earliest candidate on ties) and refits it on all rows.
pub fn grid_search_with_folds(
    ds: &Dataset,
    grid: &Grid,
    folds: &FoldAssignment,
    scale: bool,
) -> Result<TuneResult> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let mut candidates = Vec::with_capacity(grid.len());
    let mut best: Option<(usize, f64)> = None;
    let mut last_error = None;
    for (i, params) in grid.candidates.iter().enumerate() {
        match cross_validate_with_folds(ds, params, folds, scale) {
            Ok(cv) => {
                let acc = cv.mean_accuracy;
                if best.is_none_or(|(_, b)| acc > b) {
                    best = Some((i, acc));
                }
                candidates.push(CandidateResult {
                    params: *params,
                    mean_accuracy: Some(acc),
                    cv: Some(cv),
                    error: None,
                });
            }
            Err(e) => {
                let msg = e.to_string();
                last_error = Some(msg.clone());
                candidates.push(CandidateResult {
                    params: *params,
                    mean_accuracy: None,
                    cv: None,
                    error: Some(msg),
                });
            }
        }
    }
    let Some((best_index, _)) = best else {
        return Err(Error::AllCandidatesFailed(last_error.unwrap_or_default()));
    };
    let best_params = grid.candidates[best_index];
    let final_model = TrainedModel::fit(ds, &best_params, scale)?;
    let best_cv = candidates[best_index]
        .cv
        .clone()
        .ok_or(Error::AllCandidatesFailed(String::new()))?;
    Ok(TuneResult {
        algorithm: grid.algorithm,
        scaled: scale,
        fold_fingerprint: folds.fingerprint(),
        candidates,
        best_index,
        best: best_params,
        best_cv,
        final_model,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComparisonRow {
    pub algorithm: Algorithm,
    pub best: HyperParams,
    pub mean_accuracy: f64,
    /// Pooled metrics over all held-out predictions.
    pub metrics: MetricsReport,
    /// Per metric (accuracy, recall, specificity, precision): whether this
    /// row attains the column maximum.
    pub best_on: [bool; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub k: usize,
    pub seed: u64,
    pub fold_fingerprint: u64,
    pub rows: Vec<ComparisonRow>,
    pub tuning: Vec<TuneResult>,
}

impl Comparison {
    pub fn row(&self, algorithm: Algorithm) -> Option<&ComparisonRow> {
        self.rows.iter().find(|r| r.algorithm == algorithm)
    }
}

/// Tunes each grid on one shared fold assignment and tabulates the winners'
/// pooled metrics. `scale` overrides the per-algorithm scaling default.
pub fn compare_models(
    ds: &Dataset,
    grids: &[Grid],
    k: usize,
    seed: u64,
    scale: Option<bool>,
) -> Result<Comparison> {
    let folds = stratified_folds(&ds.labels(), k, seed)?;
    let mut tuning = Vec::with_capacity(grids.len());
    for grid in grids {
        let s = scale.unwrap_or_else(|| grid.algorithm.scales_by_default());
        tuning.push(grid_search_with_folds(ds, grid, &folds, s)?);
    }
    let mut rows: Vec<ComparisonRow> = tuning
        .iter()
        .map(|t| ComparisonRow {
            algorithm: t.algorithm,
            best: t.best,
            mean_accuracy: t.best_cv.mean_accuracy,
            metrics: t.best_cv.pooled,
            best_on: [false; 4],
        })
        .collect();
    for m in 0..4 {
        let column: Vec<Option<f64>> = rows.iter().map(|r| r.metrics.values()[m]).collect();
        let max = column
            .iter()
            .flatten()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max);
        for (row, v) in rows.iter_mut().zip(&column) {
            row.best_on[m] = *v == Some(max);
        }
    }
    Ok(Comparison {
        k,
        seed,
        fold_fingerprint: folds.fingerprint(),
        rows,
        tuning,
    })
}

/// Default grids for all three algorithms.
pub fn compare_default(
    ds: &Dataset,
    k: usize,
    seed: u64,
    scale: Option<bool>,
) -> Result<Comparison> {
    compare_models(ds, &default_grids(), k, seed, scale)
}
