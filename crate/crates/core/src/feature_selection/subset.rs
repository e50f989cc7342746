//! Wrapper subset selection: best-first search over feature subsets scored
//! by the cross-validated accuracy of a classifier.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::classifiers::HyperParams;
use crate::dataset::Dataset;
use crate::error::{Error, Result};
use crate::evaluation::{cross_validate_with_folds, stratified_folds, FoldAssignment};

/// Minimum objective gain that counts as progress for the stale counter.
pub const IMPROVEMENT_EPSILON: f64 = 1e-5;

pub const DEFAULT_STALE_LIMIT: usize = 5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsetSearchResult {
    /// Selected features in schema order.
    pub selected: Vec<String>,
    /// Mean cross-validated accuracy of the wrapped classifier.
    pub objective: f64,
    /// Number of subsets evaluated.
    pub expansions: usize,
}

/// Feature subset as a bit mask over schema positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FeatureMask(pub u64);

impl FeatureMask {
    pub const EMPTY: FeatureMask = FeatureMask(0);

    pub fn contains(self, j: usize) -> bool {
        self.0 & (1 << j) != 0
    }

    pub fn toggle(self, j: usize) -> FeatureMask {
        FeatureMask(self.0 ^ (1 << j))
    }

    pub fn indices(self, n: usize) -> Vec<usize> {
        (0..n).filter(|&j| self.contains(j)).collect()
    }
}

/// Scores feature subsets on one fixed fold assignment, caching results.
#[derive(Debug)]
pub struct SubsetObjective<'a> {
    ds: &'a Dataset,
    params: HyperParams,
    folds: FoldAssignment,
    scale: bool,
    cache: BTreeMap<FeatureMask, f64>,
}

impl<'a> SubsetObjective<'a> {
    pub fn new(
        ds: &'a Dataset,
        params: HyperParams,
        k: usize,
        seed: u64,
        scale: bool,
    ) -> Result<Self> {
        if ds.n_features() > 64 {
            return Err(Error::TooManyFeatures(ds.n_features()));
        }
        let folds = stratified_folds(&ds.labels(), k, seed)?;
        Ok(SubsetObjective {
            ds,
            params,
            folds,
            scale,
            cache: BTreeMap::new(),
        })
    }

    pub fn evaluate(&mut self, mask: FeatureMask) -> Result<f64> {
        if let Some(&v) = self.cache.get(&mask) {
            return Ok(v);
        }
        let view = self.ds.project(&mask.indices(self.ds.n_features()));
        let cv = cross_validate_with_folds(&view, &self.params, &self.folds, self.scale)?;
        self.cache.insert(mask, cv.mean_accuracy);
        Ok(cv.mean_accuracy)
    }

    pub fn evaluations(&self) -> usize {
        self.cache.len()
    }

    pub fn is_evaluated(&self, mask: FeatureMask) -> bool {
        self.cache.contains_key(&mask)
    }
}

/// Best-first search from the empty subset. Each expansion takes the open
/// node with the highest objective (earliest discovered on ties) and scores
/// every subset one addition or deletion away. The search stops after
/// `stale_limit` consecutive expansions that fail to raise the best
/// objective by more than [`IMPROVEMENT_EPSILON`], or when no open nodes
/// remain. Pass `usize::MAX` for an exhaustive search.
pub fn best_first_subset(
    ds: &Dataset,
    params: &HyperParams,
    k: usize,
    seed: u64,
    stale_limit: usize,
    scale: bool,
) -> Result<SubsetSearchResult> {
    if stale_limit == 0 {
        return Err(Error::InvalidHyperParams(
            "stale limit must be at least 1".into(),
        ));
    }
    params.validate()?;
    let n = ds.n_features();
    let mut objective = SubsetObjective::new(ds, *params, k, seed, scale)?;

    let start = FeatureMask::EMPTY;
    let mut best = (objective.evaluate(start)?, start);
    // (merit, discovery order, mask)
    let mut open: Vec<(f64, usize, FeatureMask)> = alloc::vec![(best.0, 0, start)];
    let mut discovered = 1usize;
    let mut stale = 0usize;

    while stale < stale_limit {
        let Some(pos) = open
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .0.total_cmp(&b.1 .0).then(b.1 .1.cmp(&a.1 .1)))
            .map(|(i, _)| i)
        else {
            break;
        };
        let (_, _, node) = open.swap_remove(pos);
        let before = best.0;
        for j in 0..n {
            let child = node.toggle(j);
            if objective.is_evaluated(child) {
                continue;
            }
            let merit = objective.evaluate(child)?;
            open.push((merit, discovered, child));
            discovered += 1;
            if merit > best.0 {
                best = (merit, child);
            }
        }
        if best.0 - before > IMPROVEMENT_EPSILON {
            stale = 0;
        } else {
            stale += 1;
        }
    }

    Ok(SubsetSearchResult {
        selected: best
            .1
            .indices(n)
            .into_iter()
            .map(|j| ds.schema[j].name.clone())
            .collect(),
        objective: best.0,
        expansions: objective.evaluations(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Label;
    use alloc::vec;

    #[test]
    fn mask_ops() {
        let m = FeatureMask::EMPTY.toggle(0).toggle(3);
        assert!(m.contains(3) && !m.contains(1));
        assert_eq!(m.indices(5), vec![0, 3]);
        assert_eq!(m.toggle(3).indices(5), vec![0]);
    }

    #[test]
    fn zero_stale_limit_rejected() {
        let ds = Dataset::from_vectors(
            vec![vec![0.0], vec![1.0]],
            &[Label::Negative, Label::Positive],
        )
        .unwrap();
        assert!(best_first_subset(&ds, &HyperParams::gaussian_nb(), 2, 1, 0, false).is_err());
    }
}
