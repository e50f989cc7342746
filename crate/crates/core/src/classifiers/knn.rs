use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::distance::{check_len, squared_distance};
use crate::dataset::{Dataset, Label, Record};
use crate::error::{Error, Result};
use crate::math;

/// Stored exemplars plus `k`; prediction is a majority vote among the `k`
/// nearest under Euclidean distance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub k: usize,
    pub exemplars: Vec<Record>,
}

pub fn knn_fit(ds: &Dataset, k: usize) -> Result<KnnModel> {
    if k == 0 || k.is_multiple_of(2) {
        return Err(Error::InvalidHyperParams(
            "k must be an odd positive integer".into(),
        ));
    }
    if k > ds.len() {
        return Err(Error::InvalidHyperParams(alloc::format!(
            "k = {k} exceeds the {} training rows",
            ds.len()
        )));
    }
    Ok(KnnModel {
        k,
        exemplars: ds.rows.clone(),
    })
}

impl KnnModel {
    pub fn n_features(&self) -> usize {
        self.exemplars.first().map_or(0, |r| r.features.len())
    }

    /// Indices and distances of the `k` nearest exemplars, nearest first.
    /// Equal distances keep exemplar order.
    pub fn neighbours(&self, x: &[f64]) -> Result<Vec<(usize, f64)>> {
        check_len(self.n_features(), x.len())?;
        let mut d: Vec<(usize, f64)> = self
            .exemplars
            .iter()
            .enumerate()
            .map(|(i, r)| (i, squared_distance(&r.features, x)))
            .collect();
        d.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(&b.0)));
        d.truncate(self.k);
        Ok(d.into_iter().map(|(i, sq)| (i, math::sqrt(sq))).collect())
    }

    /// Majority label among the nearest `k`. A vote tie goes to the class
    /// with the smaller summed distance, then to the negative class.
    pub fn predict(&self, x: &[f64]) -> Result<Label> {
        let mut votes = [0usize; 2];
        let mut dist = [0.0f64; 2];
        for (i, d) in self.neighbours(x)? {
            let c = self.exemplars[i].label.index();
            votes[c] += 1;
            dist[c] += d;
        }
        Ok(
            if votes[1] > votes[0] || (votes[1] == votes[0] && dist[1] < dist[0]) {
                Label::Positive
            } else {
                Label::Negative
            },
        )
    }
}
