//! Feature relevance ranking and wrapper subset search.

mod information;
mod ranking;
mod subset;

use alloc::string::String;
use alloc::vec::Vec;

pub use information::{discretize_mdl, entropy, info_gain};
pub use ranking::{
    correlation_score, rank_features, score_feature, Evaluator, FeatureScore, RankedList,
};
pub use subset::{
    best_first_subset, FeatureMask, SubsetObjective, SubsetSearchResult, DEFAULT_STALE_LIMIT,
    IMPROVEMENT_EPSILON,
};

use crate::schema::FeatureSchema;

/// Union of each ranking's top `top_n` and the wrapper subset, in schema
/// order.
pub fn aggregate_selection(
    schema: &[FeatureSchema],
    rankings: &[RankedList],
    top_n: usize,
    subset: &[String],
) -> Vec<String> {
    schema
        .iter()
        .map(|f| &f.name)
        .filter(|name| {
            subset.contains(name)
                || rankings
                    .iter()
                    .any(|r| r.position(name).is_some_and(|p| p < top_n))
        })
        .cloned()
        .collect()
}
