//! Stratified k-fold cross-validation and the four confusion-matrix metrics.
//!
//! Fold assignment: the rows of each class, in dataset order, are shuffled
//! with a ChaCha8 generator seeded from the 64-bit seed (`seed_from_u64`),
//! then dealt round-robin into the folds. Dealing continues from the fold
//! where the previous class stopped, so overall fold sizes differ by at most
//! one as well as per-class counts.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::classifiers::{HyperParams, TrainedModel};
use crate::dataset::{Dataset, Label};
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FoldAssignment {
    pub fold_of_row: Vec<usize>,
    pub k: usize,
    pub seed: u64,
}

impl FoldAssignment {
    pub fn held_out(&self, fold: usize) -> Vec<usize> {
        (0..self.fold_of_row.len())
            .filter(|&i| self.fold_of_row[i] == fold)
            .collect()
    }

    pub fn training(&self, fold: usize) -> Vec<usize> {
        (0..self.fold_of_row.len())
            .filter(|&i| self.fold_of_row[i] != fold)
            .collect()
    }

    pub fn fold_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &f in &self.fold_of_row {
            sizes[f] += 1;
        }
        sizes
    }

    /// FNV-1a hash of `k` and the row-to-fold map.
    pub fn fingerprint(&self) -> u64 {
        const OFFSET: u64 = 0xcbf2_9ce4_8422_2325;
        const PRIME: u64 = 0x0000_0100_0000_01b3;
        let mut h = OFFSET;
        for word in core::iter::once(self.k).chain(self.fold_of_row.iter().copied()) {
            for b in (word as u64).to_le_bytes() {
                h ^= u64::from(b);
                h = h.wrapping_mul(PRIME);
            }
        }
        h
    }
}

/// Assigns rows to `k` stratified folds. Each class needs at least `k`
/// members, except for leave-one-out (`k` equal to the row count).
pub fn stratified_folds(labels: &[Label], k: usize, seed: u64) -> Result<FoldAssignment> {
    let n = labels.len();
    if k < 2 || k > n {
        return Err(Error::InvalidFoldCount { k, rows: n });
    }
    if k < n {
        for class in Label::ALL {
            let count = labels.iter().filter(|&&l| l == class).count();
            if count < k {
                return Err(Error::TooFewPerClass { class, count, k });
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fold_of_row = vec![0; n];
    let mut next = 0;
    for class in Label::ALL {
        let mut rows: Vec<usize> = (0..n).filter(|&i| labels[i] == class).collect();
        rows.shuffle(&mut rng);
        for i in rows {
            fold_of_row[i] = next;
            next = (next + 1) % k;
        }
    }
    Ok(FoldAssignment {
        fold_of_row,
        k,
        seed,
    })
}

/// Confusion counts with disease (`Positive`) as the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub fp: usize,
    pub tn: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.tn + self.fn_
    }

    pub fn record(&mut self, predicted: Label, actual: Label) {
        match (predicted, actual) {
            (Label::Positive, Label::Positive) => self.tp += 1,
            (Label::Positive, Label::Negative) => self.fp += 1,
            (Label::Negative, Label::Negative) => self.tn += 1,
            (Label::Negative, Label::Positive) => self.fn_ += 1,
        }
    }
}

impl core::ops::Add for ConfusionMatrix {
    type Output = ConfusionMatrix;

    fn add(self, o: ConfusionMatrix) -> ConfusionMatrix {
        ConfusionMatrix {
            tp: self.tp + o.tp,
            fp: self.fp + o.fp,
            tn: self.tn + o.tn,
            fn_: self.fn_ + o.fn_,
        }
    }
}

pub fn confusion(predicted: &[Label], actual: &[Label]) -> Result<ConfusionMatrix> {
    if predicted.len() != actual.len() {
        return Err(Error::LengthMismatch {
            expected: actual.len(),
            found: predicted.len(),
        });
    }
    let mut cm = ConfusionMatrix::default();
    for (&p, &a) in predicted.iter().zip(actual) {
        cm.record(p, a);
    }
    Ok(cm)
}

/// The four metrics. `None` marks a zero denominator.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub accuracy: Option<f64>,
    pub recall: Option<f64>,
    pub specificity: Option<f64>,
    pub precision: Option<f64>,
    pub matrix: ConfusionMatrix,
}

fn ratio(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

/// Accuracy `(TP+TN)/total`, recall `TP/(TP+FN)`, specificity
/// `TN/(TN+FP)` and precision `TP/(TP+FP)`.
pub fn metrics(cm: &ConfusionMatrix) -> Result<MetricsReport> {
    if cm.total() == 0 {
        return Err(Error::EmptyMatrix);
    }
    Ok(MetricsReport {
        accuracy: ratio(cm.tp + cm.tn, cm.total()),
        recall: ratio(cm.tp, cm.tp + cm.fn_),
        specificity: ratio(cm.tn, cm.tn + cm.fp),
        precision: ratio(cm.tp, cm.tp + cm.fp),
        matrix: *cm,
    })
}

impl MetricsReport {
    /// Metrics in report order: accuracy, recall, specificity, precision.
    pub fn values(&self) -> [Option<f64>; 4] {
        [self.accuracy, self.recall, self.specificity, self.precision]
    }
}

pub const METRIC_NAMES: [&str; 4] = ["accuracy", "recall", "specificity", "precision"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CvResult {
    pub k: usize,
    pub seed: u64,
    pub fold_fingerprint: u64,
    pub per_fold: Vec<MetricsReport>,
    /// Metrics of the summed fold matrices.
    pub pooled: MetricsReport,
    /// Unweighted mean of the per-fold accuracies.
    pub mean_accuracy: f64,
}

/// Cross-validates `params` over fresh stratified folds.
pub fn cross_validate(
    ds: &Dataset,
    params: &HyperParams,
    k: usize,
    seed: u64,
    scale: bool,
) -> Result<CvResult> {
    let folds = stratified_folds(&ds.labels(), k, seed)?;
    cross_validate_with_folds(ds, params, &folds, scale)
}

/// Cross-validates over a given assignment. Scaling statistics and the
/// model are fitted on the training folds only.
pub fn cross_validate_with_folds(
    ds: &Dataset,
    params: &HyperParams,
    folds: &FoldAssignment,
    scale: bool,
) -> Result<CvResult> {
    if folds.fold_of_row.len() != ds.len() {
        return Err(Error::LengthMismatch {
            expected: ds.len(),
            found: folds.fold_of_row.len(),
        });
    }
    let mut per_fold = Vec::with_capacity(folds.k);
    let mut pooled = ConfusionMatrix::default();
    for f in 0..folds.k {
        let train = ds.subset(&folds.training(f));
        let test = ds.subset(&folds.held_out(f));
        let model = TrainedModel::fit(&train, params, scale)?;
        let predicted = model.predict_dataset(&test)?;
        let cm = confusion(&predicted, &test.labels())?;
        pooled = pooled + cm;
        per_fold.push(metrics(&cm)?);
    }
    let mean_accuracy = per_fold
        .iter()
        .map(|m| m.accuracy.unwrap_or(0.0))
        .sum::<f64>()
        / folds.k as f64;
    Ok(CvResult {
        k: folds.k,
        seed: folds.seed,
        fold_fingerprint: folds.fingerprint(),
        per_fold,
        pooled: metrics(&pooled)?,
        mean_accuracy,
    })
}
