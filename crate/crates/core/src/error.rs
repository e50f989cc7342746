use alloc::string::String;

use crate::dataset::Label;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("line {line}: expected {expected} fields, found {found}")]
    WrongFieldCount {
        line: usize,
        expected: usize,
        found: usize,
    },
    #[error("line {line}, column {column}: cell is neither '?' nor a number")]
    NonNumericCell { line: usize, column: usize },
    #[error("no input lines")]
    NoInput,
    #[error("dataset is empty after removing incomplete rows")]
    EmptyDataset,
    #[error("target value {0} is outside 0..=4")]
    OutOfRangeTarget(f64),
    #[error("line {line}: value {value} is not allowed for feature {feature}")]
    DisallowedValue {
        line: usize,
        feature: String,
        value: f64,
    },
    #[error("unknown feature: {0}")]
    UnknownFeature(String),
    #[error("scaling statistics cover {found} features, dataset has {expected}")]
    StatsMismatch { expected: usize, found: usize },
    #[error("empty input")]
    EmptyInput,
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("training data contains a single class")]
    SingleClassData,
    #[error("class {class:?} has {count} rows, at least {required} required")]
    TooFewRows {
        class: Label,
        count: usize,
        required: usize,
    },
    #[error("invalid hyperparameters: {0}")]
    InvalidHyperParams(String),
    #[error("SMO did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("class {class:?} has {count} rows, fewer than the {k} folds requested")]
    TooFewPerClass {
        class: Label,
        count: usize,
        k: usize,
    },
    #[error("cannot split {rows} rows into {k} folds")]
    InvalidFoldCount { k: usize, rows: usize },
    #[error("confusion matrix is empty")]
    EmptyMatrix,
    #[error("grid is empty")]
    EmptyGrid,
    #[error("grid mixes algorithms")]
    MixedGrid,
    #[error("every grid candidate failed: {0}")]
    AllCandidatesFailed(String),
    #[error("subset search supports at most 64 features, got {0}")]
    TooManyFeatures(usize),
}
