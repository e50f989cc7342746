//! The three classifiers behind one train/predict surface.

mod distance;
pub mod knn;
pub mod naive_bayes;
mod params;
pub mod svm;

use alloc::string::String;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

pub use distance::euclidean_distance;
pub use knn::{knn_fit, KnnModel};
pub use naive_bayes::{nb_fit, NaiveBayesModel};
pub use params::{Algorithm, HyperParams};
pub use svm::{rbf_kernel, smo_solve, svm_fit, SmoSolution, SolverOptions, SvmModel};

use crate::dataset::{Dataset, Label, ScalingStats};
use crate::error::Result;
use crate::math;

/// `P(c | x)` indexed by [`Label::index`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Posterior(pub [f64; 2]);

impl Posterior {
    pub fn from_log_scores(scores: [f64; 2]) -> Posterior {
        let norm = math::log_sum_exp(&scores);
        if !norm.is_finite() {
            return Posterior([0.5, 0.5]);
        }
        let p0 = math::exp(scores[0] - norm);
        let p1 = math::exp(scores[1] - norm);
        let total = p0 + p1;
        Posterior([p0 / total, p1 / total])
    }

    pub fn get(&self, label: Label) -> f64 {
        self.0[label.index()]
    }

    /// Ties go to the negative class.
    pub fn argmax(&self) -> Label {
        if self.0[1] > self.0[0] {
            Label::Positive
        } else {
            Label::Negative
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm")]
pub enum Classifier {
    #[serde(rename = "nb")]
    NaiveBayes(NaiveBayesModel),
    #[serde(rename = "knn")]
    Knn(KnnModel),
    #[serde(rename = "svm")]
    Svm(SvmModel),
}

impl Classifier {
    pub fn algorithm(&self) -> Algorithm {
        match self {
            Classifier::NaiveBayes(_) => Algorithm::NaiveBayes,
            Classifier::Knn(_) => Algorithm::Knn,
            Classifier::Svm(_) => Algorithm::Svm,
        }
    }
}

/// A fitted classifier together with the input schema and the scaling it
/// was trained under. Inputs to [`TrainedModel::predict`] are raw feature
/// vectors; scaling is applied internally.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub feature_names: Vec<String>,
    pub params: HyperParams,
    pub scaling: Option<ScalingStats>,
    pub classifier: Classifier,
}

impl TrainedModel {
    /// Fits `params` on `ds`, z-scoring continuous columns first when
    /// `scale` is set.
    pub fn fit(ds: &Dataset, params: &HyperParams, scale: bool) -> Result<TrainedModel> {
        params.validate()?;
        let (train, scaling) = if scale {
            let stats = ScalingStats::fit(ds);
            (stats.transform(ds)?, Some(stats))
        } else {
            (ds.clone(), None)
        };
        let classifier = match *params {
            HyperParams::NaiveBayes {
                use_kernel_density,
                laplace,
                bandwidth_adjust,
            } => Classifier::NaiveBayes(nb_fit(
                &train,
                use_kernel_density,
                laplace,
                bandwidth_adjust,
            )?),
            HyperParams::Knn { k } => Classifier::Knn(knn_fit(&train, k)?),
            HyperParams::Svm { c, sigma } => {
                Classifier::Svm(svm_fit(&train, c, sigma, &SolverOptions::default())?)
            }
        };
        Ok(TrainedModel {
            feature_names: ds.feature_names(),
            params: *params,
            scaling,
            classifier,
        })
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    fn prepare(&self, x: &[f64]) -> Result<Vec<f64>> {
        distance::check_len(self.n_features(), x.len())?;
        let mut v = x.to_vec();
        if let Some(s) = &self.scaling {
            s.apply(&mut v);
        }
        Ok(v)
    }

    pub fn predict(&self, x: &[f64]) -> Result<Label> {
        let v = self.prepare(x)?;
        match &self.classifier {
            Classifier::NaiveBayes(m) => m.predict(&v),
            Classifier::Knn(m) => m.predict(&v),
            Classifier::Svm(m) => m.predict(&v),
        }
    }

    /// Class posterior, for models that provide one (naive Bayes).
    pub fn posterior(&self, x: &[f64]) -> Result<Option<Posterior>> {
        let v = self.prepare(x)?;
        match &self.classifier {
            Classifier::NaiveBayes(m) => m.posterior(&v).map(Some),
            _ => Ok(None),
        }
    }

    pub fn predict_dataset(&self, ds: &Dataset) -> Result<Vec<Label>> {
        ds.rows.iter().map(|r| self.predict(&r.features)).collect()
    }
}
