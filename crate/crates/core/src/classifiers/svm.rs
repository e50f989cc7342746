//! Soft-margin SVM with an RBF kernel, trained by sequential minimal
//! optimization on the dual
//!
//! ```text
//! max W(α) = Σ α_i − ½ Σ_ij α_i α_j y_i y_j K(x_i, x_j)
//! s.t.      0 ≤ α_i ≤ C,  Σ α_i y_i = 0
//! ```
//!
//! Each step picks the point that most violates the KKT conditions, pairs it
//! with the partner whose error differs from it the most, and solves the
//! two-variable subproblem in closed form. Iteration stops once the largest
//! pairwise violation is at most `tol`, which bounds every point's KKT
//! residual by `tol`.

use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::distance::{check_len, squared_distance};
use crate::dataset::{Dataset, Label};
use crate::error::{Error, Result};
use crate::math;

/// Largest training set for which the full kernel matrix is cached.
pub const FULL_CACHE_ROWS: usize = 10_000;

/// `exp(-sigma · |x - y|^2)`.
pub fn rbf_kernel(x: &[f64], y: &[f64], sigma: f64) -> Result<f64> {
    check_len(x.len(), y.len())?;
    if sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::InvalidHyperParams("sigma must be positive".into()));
    }
    Ok(math::exp(-sigma * squared_distance(x, y)))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// KKT tolerance.
    pub tol: f64,
    pub max_iterations: usize,
    /// Record the dual objective every this many iterations (0 disables).
    pub checkpoint_every: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            tol: 1e-3,
            max_iterations: 1_000_000,
            checkpoint_every: 0,
        }
    }
}

/// Full dual solution, including zero multipliers.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoSolution {
    pub alpha: Vec<f64>,
    pub bias: f64,
    pub dual_objective: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Largest pairwise KKT violation at exit.
    pub max_violation: f64,
    /// Dual objective at each checkpoint, in iteration order.
    pub objective_trace: Vec<f64>,
}

enum Kernel<'a> {
    Full { n: usize, values: Vec<f64> },
    OnDemand { points: &'a [&'a [f64]], sigma: f64 },
}

impl Kernel<'_> {
    fn get(&self, i: usize, j: usize) -> f64 {
        match self {
            Kernel::Full { n, values } => values[i * n + j],
            Kernel::OnDemand { points, sigma } => {
                math::exp(-sigma * squared_distance(points[i], points[j]))
            }
        }
    }
}

/// Solves the dual for `points` with `signs` in `{-1, +1}`.
pub fn smo_solve(
    points: &[&[f64]],
    signs: &[f64],
    c: f64,
    sigma: f64,
    options: &SolverOptions,
) -> Result<SmoSolution> {
    let n = points.len();
    check_len(n, signs.len())?;
    if c.is_nan() || c <= 0.0 || sigma.is_nan() || sigma <= 0.0 {
        return Err(Error::InvalidHyperParams(
            "C and sigma must be positive".into(),
        ));
    }
    if !(signs.iter().any(|&y| y > 0.0) && signs.iter().any(|&y| y < 0.0)) {
        return Err(Error::SingleClassData);
    }
    let kernel = if n <= FULL_CACHE_ROWS {
        let mut values = vec![0.0; n * n];
        for i in 0..n {
            values[i * n + i] = 1.0;
            for j in 0..i {
                let k = math::exp(-sigma * squared_distance(points[i], points[j]));
                values[i * n + j] = k;
                values[j * n + i] = k;
            }
        }
        Kernel::Full { n, values }
    } else {
        Kernel::OnDemand { points, sigma }
    };

    let y = signs;
    let mut alpha = vec![0.0; n];
    // Gradient of ½αᵀQα − Σα, with Q_ij = y_i y_j K_ij.
    let mut grad = vec![-1.0; n];
    let objective = |alpha: &[f64], grad: &[f64]| -> f64 {
        0.5 * alpha
            .iter()
            .zip(grad)
            .map(|(a, g)| a * (1.0 - g))
            .sum::<f64>()
    };
    // α_i may move in the direction that increases y_i α_i.
    let in_up = |a: f64, y: f64| (y > 0.0 && a < c) || (y < 0.0 && a > 0.0);
    let in_low = |a: f64, y: f64| (y > 0.0 && a > 0.0) || (y < 0.0 && a < c);

    let mut trace = Vec::new();
    let mut iterations = 0;
    let mut converged = false;
    let mut violation;
    loop {
        // First choice: the worst violator from the "up" set. Second
        // choice: the "low" partner maximizing |E_i - E_j|, where
        // E_k = -y_k ∇_k up to the shared bias.
        let mut i = usize::MAX;
        let mut r_max = f64::NEG_INFINITY;
        let mut j = usize::MAX;
        let mut r_min = f64::INFINITY;
        for t in 0..n {
            let r = -y[t] * grad[t];
            if in_up(alpha[t], y[t]) && r > r_max {
                r_max = r;
                i = t;
            }
            if in_low(alpha[t], y[t]) && r < r_min {
                r_min = r;
                j = t;
            }
        }
        violation = r_max - r_min;
        if violation <= options.tol || i == usize::MAX || j == usize::MAX {
            converged = true;
            break;
        }
        if iterations >= options.max_iterations {
            break;
        }
        iterations += 1;

        // Step d along α_i += y_i d, α_j -= y_j d.
        let eta = kernel.get(i, i) + kernel.get(j, j) - 2.0 * kernel.get(i, j);
        let bound_i = if y[i] > 0.0 { c - alpha[i] } else { alpha[i] };
        let bound_j = if y[j] > 0.0 { alpha[j] } else { c - alpha[j] };
        let unconstrained = if eta > 1e-12 {
            violation / eta
        } else {
            f64::INFINITY
        };
        let d = unconstrained.min(bound_i).min(bound_j);
        let old_i = alpha[i];
        let old_j = alpha[j];
        alpha[i] = if d == bound_i {
            if y[i] > 0.0 {
                c
            } else {
                0.0
            }
        } else {
            old_i + y[i] * d
        };
        alpha[j] = if d == bound_j {
            if y[j] > 0.0 {
                0.0
            } else {
                c
            }
        } else {
            old_j - y[j] * d
        };
        let delta_i = alpha[i] - old_i;
        let delta_j = alpha[j] - old_j;
        for (t, g) in grad.iter_mut().enumerate() {
            *g += y[t] * (y[i] * kernel.get(t, i) * delta_i + y[j] * kernel.get(t, j) * delta_j);
        }

        if options.checkpoint_every > 0 && iterations % options.checkpoint_every == 0 {
            trace.push(objective(&alpha, &grad));
        }
    }

    // Bias from free vectors when any exist; otherwise the midpoint of the
    // feasible interval.
    let mut free_sum = 0.0;
    let mut free_count = 0usize;
    let mut up_max = f64::NEG_INFINITY;
    let mut low_min = f64::INFINITY;
    for t in 0..n {
        let r = -y[t] * grad[t];
        if alpha[t] > 0.0 && alpha[t] < c {
            free_sum += r;
            free_count += 1;
        }
        if in_up(alpha[t], y[t]) {
            up_max = up_max.max(r);
        }
        if in_low(alpha[t], y[t]) {
            low_min = low_min.min(r);
        }
    }
    let bias = if free_count > 0 {
        free_sum / free_count as f64
    } else if up_max.is_finite() && low_min.is_finite() {
        0.5 * (up_max + low_min)
    } else if up_max.is_finite() {
        up_max
    } else {
        low_min
    };
    let dual_objective = objective(&alpha, &grad);
    if options.checkpoint_every > 0 {
        trace.push(dual_objective);
    }
    Ok(SmoSolution {
        alpha,
        bias,
        dual_objective,
        iterations,
        converged,
        max_violation: violation,
        objective_trace: trace,
    })
}

/// Fitted RBF SVM. Only points with a non-zero multiplier are kept.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SvmModel {
    pub support_vectors: Vec<Vec<f64>>,
    /// `α_i · y_i` for each support vector.
    pub dual_coefficients: Vec<f64>,
    pub bias: f64,
    pub sigma: f64,
    pub c: f64,
    pub dual_objective: f64,
    pub iterations: usize,
    /// False when the iteration limit was hit before the KKT tolerance.
    pub converged: bool,
}

pub fn svm_fit(ds: &Dataset, c: f64, sigma: f64, options: &SolverOptions) -> Result<SvmModel> {
    let points: Vec<&[f64]> = ds.rows.iter().map(|r| r.features.as_slice()).collect();
    let signs: Vec<f64> = ds.rows.iter().map(|r| r.label.sign()).collect();
    let sol = smo_solve(&points, &signs, c, sigma, options)?;
    let mut support_vectors = Vec::new();
    let mut dual_coefficients = Vec::new();
    for (t, &a) in sol.alpha.iter().enumerate() {
        if a > 0.0 {
            support_vectors.push(points[t].to_vec());
            dual_coefficients.push(a * signs[t]);
        }
    }
    Ok(SvmModel {
        support_vectors,
        dual_coefficients,
        bias: sol.bias,
        sigma,
        c,
        dual_objective: sol.dual_objective,
        iterations: sol.iterations,
        converged: sol.converged,
    })
}

impl SvmModel {
    pub fn n_features(&self) -> usize {
        self.support_vectors.first().map_or(0, Vec::len)
    }

    /// `f(x) = Σ α_i y_i K(x_i, x) + b`.
    pub fn decision(&self, x: &[f64]) -> Result<f64> {
        check_len(self.n_features(), x.len())?;
        let sum: f64 = self
            .support_vectors
            .iter()
            .zip(&self.dual_coefficients)
            .map(|(sv, coef)| coef * math::exp(-self.sigma * squared_distance(sv, x)))
            .sum();
        Ok(sum + self.bias)
    }

    /// Positive iff `f(x) > 0`; the boundary itself is negative.
    pub fn predict(&self, x: &[f64]) -> Result<Label> {
        Ok(if self.decision(x)? > 0.0 {
            Label::Positive
        } else {
            Label::Negative
        })
    }

    pub fn ensure_converged(&self) -> Result<()> {
        if self.converged {
            Ok(())
        } else {
            Err(Error::NonConvergence {
                iterations: self.iterations,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn kernel_values() {
        assert_eq!(rbf_kernel(&[1.0, 2.0], &[1.0, 2.0], 0.5).unwrap(), 1.0);
        let k = rbf_kernel(&[0.0], &[1.0], 0.1268408).unwrap();
        assert_abs_diff_eq!(k, 0.880873, epsilon = 1e-6);
        let near = rbf_kernel(&[0.0], &[1.0], 1.0).unwrap();
        let far = rbf_kernel(&[0.0], &[3.0], 1.0).unwrap();
        assert!(far < near);
        assert!(rbf_kernel(&[0.0], &[1e3], 1.0).unwrap() < 1e-300);
        assert!(rbf_kernel(&[0.0], &[1.0, 2.0], 1.0).is_err());
    }

    #[test]
    fn two_point_symmetry() {
        let ds = Dataset::from_vectors(
            vec![vec![-1.0], vec![1.0]],
            &[Label::Negative, Label::Positive],
        )
        .unwrap();
        let m = svm_fit(&ds, 1e3, 0.5, &SolverOptions::default()).unwrap();
        assert!(m.converged);
        assert_eq!(m.support_vectors.len(), 2);
        assert_abs_diff_eq!(m.bias, 0.0, epsilon = 1e-12);
        assert!(m.decision(&[1.0]).unwrap() > 0.0);
        assert_eq!(m.predict(&[1.0]).unwrap(), Label::Positive);
        assert_eq!(m.decision(&[0.0]).unwrap(), 0.0);
        assert_eq!(m.predict(&[0.0]).unwrap(), Label::Negative);
        // Both points sit on the margin.
        assert_abs_diff_eq!(m.decision(&[1.0]).unwrap(), 1.0, epsilon = 1e-3);
        assert_abs_diff_eq!(m.decision(&[-1.0]).unwrap(), -1.0, epsilon = 1e-3);
    }

    #[test]
    fn single_class_rejected() {
        let ds = Dataset::from_vectors(
            vec![vec![-1.0], vec![1.0]],
            &[Label::Positive, Label::Positive],
        )
        .unwrap();
        assert_eq!(
            svm_fit(&ds, 1.0, 1.0, &SolverOptions::default()),
            Err(Error::SingleClassData)
        );
    }

    #[test]
    fn iteration_limit_is_flagged() {
        let features: Vec<Vec<f64>> = (0..40).map(|i| vec![(i as f64 * 0.37).sin()]).collect();
        let labels: Vec<Label> = (0..40).map(|i| Label::from_index(i % 2)).collect();
        let ds = Dataset::from_vectors(features, &labels).unwrap();
        let opts = SolverOptions {
            max_iterations: 1,
            ..SolverOptions::default()
        };
        let m = svm_fit(&ds, 10.0, 1.0, &opts).unwrap();
        assert!(!m.converged);
        assert_eq!(
            m.ensure_converged(),
            Err(Error::NonConvergence { iterations: 1 })
        );
    }
}
