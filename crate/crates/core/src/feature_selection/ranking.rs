use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::information::info_gain;
use crate::dataset::{Dataset, Label};
use crate::error::{Error, Result};
use crate::math;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Evaluator {
    InfoGain,
    Correlation,
}

impl Evaluator {
    pub fn name(self) -> &'static str {
        match self {
            Evaluator::InfoGain => "info_gain",
            Evaluator::Correlation => "correlation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureScore {
    pub feature: String,
    pub score: f64,
}

/// Scores sorted descending; equal scores keep schema order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedList {
    pub evaluator: Evaluator,
    pub entries: Vec<FeatureScore>,
}

impl RankedList {
    pub fn top(&self, n: usize) -> Vec<String> {
        self.entries
            .iter()
            .take(n)
            .map(|e| e.feature.clone())
            .collect()
    }

    pub fn at_least(&self, threshold: f64) -> Vec<String> {
        self.entries
            .iter()
            .filter(|e| e.score >= threshold)
            .map(|e| e.feature.clone())
            .collect()
    }

    pub fn position(&self, feature: &str) -> Option<usize> {
        self.entries.iter().position(|e| e.feature == feature)
    }
}

/// `|r|` between the feature column and the 0/1 labels; zero when either
/// column is constant.
pub fn correlation_score(values: &[f64], labels: &[Label]) -> Result<f64> {
    if values.len() < 2 || labels.len() < 2 {
        return Err(Error::EmptyInput);
    }
    if values.len() != labels.len() {
        return Err(Error::LengthMismatch {
            expected: labels.len(),
            found: values.len(),
        });
    }
    let y: Vec<f64> = labels.iter().map(|l| l.index() as f64).collect();
    let mx = math::mean(values);
    let my = math::mean(&y);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (&a, &b) in values.iter().zip(&y) {
        sxy += (a - mx) * (b - my);
        sxx += (a - mx) * (a - mx);
        syy += (b - my) * (b - my);
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return Ok(0.0);
    }
    Ok((sxy / math::sqrt(sxx * syy)).abs().min(1.0))
}

pub fn score_feature(ds: &Dataset, j: usize, evaluator: Evaluator) -> Result<f64> {
    let column = ds.column(j);
    let labels = ds.labels();
    match evaluator {
        Evaluator::InfoGain => info_gain(&column, &labels, ds.schema[j].kind),
        Evaluator::Correlation => correlation_score(&column, &labels),
    }
}

pub fn rank_features(ds: &Dataset, evaluator: Evaluator) -> Result<RankedList> {
    if ds.len() < 2 {
        return Err(Error::EmptyInput);
    }
    if ds.class_counts().contains(&0) {
        return Err(Error::SingleClassData);
    }
    let mut entries = (0..ds.n_features())
        .map(|j| {
            Ok(FeatureScore {
                feature: ds.schema[j].name.clone(),
                score: score_feature(ds, j, evaluator)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    // Stable sort keeps schema order among equal scores.
    entries.sort_by(|a, b| b.score.total_cmp(&a.score));
    Ok(RankedList { evaluator, entries })
}
