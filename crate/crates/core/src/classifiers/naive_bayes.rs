//! Naive Bayes with per-class, per-feature likelihoods.
//!
//! Continuous features use a Gaussian (or a Gaussian kernel density estimate
//! when `use_kernel_density` is set); discrete features use frequency tables
//! over their allowed codes with optional Laplace smoothing. The posterior is
//! `P(c | x) ∝ P(c) · Π_j P(x_j | c)`, evaluated in log space and normalized.

use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::distance::check_len;
use super::Posterior;
use crate::dataset::{Dataset, Label};
use crate::error::{Error, Result};
use crate::math;

/// Probability used in place of an exact zero from a frequency table.
pub const ZERO_PROBABILITY_FLOOR: f64 = 1e-3;

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum Likelihood {
    Gaussian {
        mean: f64,
        variance: f64,
    },
    Kernel {
        samples: Vec<f64>,
        bandwidth: f64,
    },
    Table {
        values: Vec<f64>,
        probabilities: Vec<f64>,
    },
}

impl Likelihood {
    pub fn ln_density(&self, x: f64) -> f64 {
        match self {
            Likelihood::Gaussian { mean, variance } => {
                let d = x - mean;
                -LN_SQRT_2PI - 0.5 * math::ln(*variance) - d * d / (2.0 * variance)
            }
            Likelihood::Kernel { samples, bandwidth } => {
                let terms: Vec<f64> = samples
                    .iter()
                    .map(|s| {
                        let u = (x - s) / bandwidth;
                        -0.5 * u * u
                    })
                    .collect();
                math::log_sum_exp(&terms) - math::ln(samples.len() as f64 * bandwidth) - LN_SQRT_2PI
            }
            Likelihood::Table {
                values,
                probabilities,
            } => {
                let p = values
                    .iter()
                    .position(|&v| v == x)
                    .map_or(0.0, |i| probabilities[i]);
                math::ln(if p > 0.0 { p } else { ZERO_PROBABILITY_FLOOR })
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NaiveBayesModel {
    /// Indexed by [`Label::index`].
    pub class_priors: [f64; 2],
    /// `likelihoods[j][c]` models feature `j` under class `c`.
    pub likelihoods: Vec<[Likelihood; 2]>,
    pub laplace: f64,
    pub use_kernel_density: bool,
}

/// Rule-of-thumb bandwidth `0.9 · min(sd, IQR / 1.34) · n^(-1/5)`, falling
/// back to the standard deviation, then `|x_0|`, then 1 when the spread is
/// zero.
pub fn silverman_bandwidth(samples: &[f64]) -> f64 {
    let n = samples.len();
    let sd = math::sqrt(math::sample_variance(samples));
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let iqr = quantile(&sorted, 0.75) - quantile(&sorted, 0.25);
    let mut lo = sd.min(iqr / 1.34);
    if lo <= 0.0 {
        lo = sd;
    }
    if lo <= 0.0 {
        lo = samples.first().map_or(0.0, |v| v.abs());
    }
    if lo <= 0.0 {
        lo = 1.0;
    }
    0.9 * lo * math::powf(n as f64, -0.2)
}

/// Linear-interpolation quantile of sorted data.
fn quantile(sorted: &[f64], q: f64) -> f64 {
    if sorted.is_empty() {
        return 0.0;
    }
    let pos = q * (sorted.len() - 1) as f64;
    let lo = pos as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    let frac = pos - lo as f64;
    sorted[lo] + (sorted[hi] - sorted[lo]) * frac
}

fn frequency_table(class_values: &[f64], domain: &[f64], laplace: f64) -> Likelihood {
    let levels = domain.len() as f64;
    let denom = class_values.len() as f64 + laplace * levels;
    let probabilities = domain
        .iter()
        .map(|&v| {
            let count = class_values.iter().filter(|&&x| x == v).count() as f64;
            if denom > 0.0 {
                (count + laplace) / denom
            } else {
                0.0
            }
        })
        .collect();
    Likelihood::Table {
        values: domain.to_vec(),
        probabilities,
    }
}

/// Fits the model. Requires both classes with at least two rows each.
pub fn nb_fit(
    ds: &Dataset,
    use_kernel_density: bool,
    laplace: f64,
    bandwidth_adjust: f64,
) -> Result<NaiveBayesModel> {
    let counts = ds.class_counts();
    if counts.contains(&0) {
        return Err(Error::SingleClassData);
    }
    for label in Label::ALL {
        if counts[label.index()] < 2 {
            return Err(Error::TooFewRows {
                class: label,
                count: counts[label.index()],
                required: 2,
            });
        }
    }
    let n = ds.len() as f64;
    let class_priors = [counts[0] as f64 / n, counts[1] as f64 / n];

    let mut likelihoods = Vec::with_capacity(ds.n_features());
    for (j, feature) in ds.schema.iter().enumerate() {
        let column = ds.column(j);
        let per_class: [Vec<f64>; 2] = [0, 1].map(|c| {
            ds.rows
                .iter()
                .filter(|r| r.label.index() == c)
                .map(|r| r.features[j])
                .collect()
        });
        let pair = if feature.kind.is_discrete() {
            let mut domain = feature.allowed_values.clone().unwrap_or_default();
            for &v in &column {
                if !domain.contains(&v) {
                    domain.push(v);
                }
            }
            domain.sort_by(f64::total_cmp);
            per_class
                .each_ref()
                .map(|vals| frequency_table(vals, &domain, laplace))
        } else if use_kernel_density {
            per_class.each_ref().map(|vals| Likelihood::Kernel {
                samples: vals.clone(),
                bandwidth: silverman_bandwidth(vals) * bandwidth_adjust,
            })
        } else {
            let floor = 1e-9 * (math::sample_variance(&column) + 1e-12);
            per_class.each_ref().map(|vals| Likelihood::Gaussian {
                mean: math::mean(vals),
                variance: math::sample_variance(vals).max(floor),
            })
        };
        likelihoods.push(pair);
    }
    Ok(NaiveBayesModel {
        class_priors,
        likelihoods,
        laplace,
        use_kernel_density,
    })
}

impl NaiveBayesModel {
    pub fn n_features(&self) -> usize {
        self.likelihoods.len()
    }

    /// Unnormalized log scores `ln P(c) + Σ ln P(x_j | c)`.
    pub fn log_scores(&self, x: &[f64]) -> Result<[f64; 2]> {
        check_len(self.n_features(), x.len())?;
        let mut scores = self.class_priors.map(math::ln);
        for (value, pair) in x.iter().zip(&self.likelihoods) {
            for (score, lik) in scores.iter_mut().zip(pair) {
                *score += lik.ln_density(*value);
            }
        }
        Ok(scores)
    }

    pub fn posterior(&self, x: &[f64]) -> Result<Posterior> {
        Ok(Posterior::from_log_scores(self.log_scores(x)?))
    }

    /// Argmax of the posterior; an exact tie goes to the negative class.
    pub fn predict(&self, x: &[f64]) -> Result<Label> {
        Ok(self.posterior(x)?.argmax())
    }
}
