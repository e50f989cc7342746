#![no_std]
#![warn(missing_debug_implementations)]

//! Classification pipeline for the Cleveland coronary artery disease data.
//!
//! The crate is `no_std` and only needs an allocator. It covers the whole
//! modelling path:
//!
//! - [`dataset`]: parsing the UCI comma-separated layout, dropping incomplete
//!   rows, binarizing the diagnosis, column selection and z-scoring.
//! - [`feature_selection`]: information gain (with MDL discretization),
//!   Pearson correlation ranking and a best-first wrapper subset search.
//! - [`classifiers`]: naive Bayes (Gaussian or kernel density), k-nearest
//!   neighbours and an RBF soft-margin SVM trained by SMO.
//! - [`evaluation`]: stratified folds, confusion matrices, the four metrics
//!   and cross-validation.
//! - [`tuning`]: grid search with a full-data refit and model comparison.
//!
//! File IO, report rendering and the command-line interface live in the
//! `heartml` companion crate.

extern crate alloc;

pub mod classifiers;
pub mod dataset;
pub mod error;
pub mod evaluation;
pub mod feature_selection;
mod math;
pub mod schema;
pub mod tuning;

pub use classifiers::{HyperParams, TrainedModel};
pub use dataset::{Dataset, Label, RawTable, Record};
pub use error::{Error, Result};
pub use evaluation::{ConfusionMatrix, CvResult, FoldAssignment, MetricsReport};
pub use schema::{FeatureKind, FeatureSchema};
