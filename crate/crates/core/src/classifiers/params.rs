use alloc::format;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "nb")]
    NaiveBayes,
    #[serde(rename = "knn")]
    Knn,
    #[serde(rename = "svm")]
    Svm,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Svm, Algorithm::Knn, Algorithm::NaiveBayes];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::NaiveBayes => "nb",
            Algorithm::Knn => "knn",
            Algorithm::Svm => "svm",
        }
    }

    /// Scale-sensitive learners get z-scored inputs unless told otherwise.
    pub fn scales_by_default(self) -> bool {
        !matches!(self, Algorithm::NaiveBayes)
    }
}

impl core::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

impl core::str::FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "nb" | "naive_bayes" | "naivebayes" => Ok(Algorithm::NaiveBayes),
            "knn" => Ok(Algorithm::Knn),
            "svm" => Ok(Algorithm::Svm),
            other => Err(Error::InvalidHyperParams(format!(
                "unknown algorithm {other:?}"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "algorithm", deny_unknown_fields)]
pub enum HyperParams {
    /// RBF soft-margin SVM; the kernel is `exp(-sigma * |x - y|^2)`.
    #[serde(rename = "svm")]
    Svm { c: f64, sigma: f64 },
    /// k-nearest neighbours with an odd `k`.
    #[serde(rename = "knn")]
    Knn { k: usize },
    #[serde(rename = "nb")]
    NaiveBayes {
        use_kernel_density: bool,
        laplace: f64,
        bandwidth_adjust: f64,
    },
}

impl HyperParams {
    pub fn algorithm(&self) -> Algorithm {
        match self {
            HyperParams::Svm { .. } => Algorithm::Svm,
            HyperParams::Knn { .. } => Algorithm::Knn,
            HyperParams::NaiveBayes { .. } => Algorithm::NaiveBayes,
        }
    }

    pub fn gaussian_nb() -> Self {
        HyperParams::NaiveBayes {
            use_kernel_density: false,
            laplace: 0.0,
            bandwidth_adjust: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |m: &str| Err(Error::InvalidHyperParams(m.into()));
        match *self {
            HyperParams::Svm { c, sigma } => {
                if !(c > 0.0 && c.is_finite()) {
                    return fail("C must be positive");
                }
                if !(sigma > 0.0 && sigma.is_finite()) {
                    return fail("sigma must be positive");
                }
            }
            HyperParams::Knn { k } => {
                if k == 0 || k % 2 == 0 {
                    return fail("k must be an odd positive integer");
                }
            }
            HyperParams::NaiveBayes {
                laplace,
                bandwidth_adjust,
                ..
            } => {
                if !(laplace >= 0.0 && laplace.is_finite()) {
                    return fail("laplace must be non-negative");
                }
                if !(bandwidth_adjust > 0.0 && bandwidth_adjust.is_finite()) {
                    return fail("bandwidth adjustment must be positive");
                }
            }
        }
        Ok(())
    }
}

impl core::fmt::Display for HyperParams {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            HyperParams::Svm { c, sigma } => write!(f, "svm C={c} sigma={sigma}"),
            HyperParams::Knn { k } => write!(f, "knn k={k}"),
            HyperParams::NaiveBayes {
                use_kernel_density,
                laplace,
                bandwidth_adjust,
            } => write!(
                f,
                "nb kernel={use_kernel_density} laplace={laplace} adjust={bandwidth_adjust}"
            ),
        }
    }
}
