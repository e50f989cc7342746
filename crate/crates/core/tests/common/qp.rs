//! Exact solver for small soft-margin SVM duals by active-set enumeration.
//!
//! Every multiplier is fixed at 0, fixed at C, or left free. For each of the
//! 3^n patterns the free block is solved from the bordered KKT system
//! `[Q_FF y_F; y_Fᵀ 0] [α_F; ν] = [1 - Q_FB α_B; -y_Bᵀ α_B]`, and the best
//! feasible candidate is kept. The optimum of a convex QP is the stationary
//! point of the face containing it, so it is always among the candidates.

pub fn rbf(x: &[f64], y: &[f64], sigma: f64) -> f64 {
    let d2: f64 = x.iter().zip(y).map(|(a, b)| (a - b) * (a - b)).sum();
    (-sigma * d2).exp()
}

pub fn gram(points: &[Vec<f64>], sigma: f64) -> Vec<Vec<f64>> {
    points
        .iter()
        .map(|p| points.iter().map(|q| rbf(p, q, sigma)).collect())
        .collect()
}

/// Dual objective Σα − ½ Σ α_i α_j y_i y_j K_ij.
pub fn dual_objective(alpha: &[f64], y: &[f64], k: &[Vec<f64>]) -> f64 {
    let n = alpha.len();
    let mut quad = 0.0;
    for i in 0..n {
        for j in 0..n {
            quad += alpha[i] * alpha[j] * y[i] * y[j] * k[i][j];
        }
    }
    alpha.iter().sum::<f64>() - 0.5 * quad
}

fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Option<Vec<f64>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).max_by(|&r, &s| a[r][col].abs().total_cmp(&a[s][col].abs()))?;
        if a[piv][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, piv);
        b.swap(col, piv);
        let pivot_row = a[col].clone();
        for r in col + 1..n {
            let f = a[r][col] / pivot_row[col];
            for (x, p) in a[r][col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * p;
            }
            b[r] -= f * b[col];
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    Some(x)
}

/// Optimal dual objective and multipliers.
pub fn solve(points: &[Vec<f64>], y: &[f64], c: f64, sigma: f64) -> (f64, Vec<f64>) {
    let n = points.len();
    assert!(n <= 10, "enumeration is exponential");
    let k = gram(points, sigma);
    let q = |i: usize, j: usize| y[i] * y[j] * k[i][j];
    let mut best: Option<(f64, Vec<f64>)> = None;
    let mut pattern = vec![0u8; n];
    for code in 0..3usize.pow(n as u32) {
        let mut rest = code;
        for p in pattern.iter_mut() {
            *p = (rest % 3) as u8;
            rest /= 3;
        }
        let free: Vec<usize> = (0..n).filter(|&i| pattern[i] == 2).collect();
        let mut alpha: Vec<f64> = pattern
            .iter()
            .map(|&p| if p == 1 { c } else { 0.0 })
            .collect();
        let fixed_balance: f64 = (0..n).filter(|&i| pattern[i] == 1).map(|i| y[i] * c).sum();
        if free.is_empty() {
            if fixed_balance.abs() > 1e-12 {
                continue;
            }
        } else {
            let m = free.len();
            let mut a = vec![vec![0.0; m + 1]; m + 1];
            let mut b = vec![0.0; m + 1];
            for (r, &i) in free.iter().enumerate() {
                for (s, &j) in free.iter().enumerate() {
                    a[r][s] = q(i, j);
                }
                a[r][m] = y[i];
                a[m][r] = y[i];
                b[r] = 1.0
                    - (0..n)
                        .filter(|&j| pattern[j] == 1)
                        .map(|j| q(i, j) * c)
                        .sum::<f64>();
            }
            b[m] = -fixed_balance;
            let Some(x) = solve_dense(a, b) else { continue };
            if x[..m].iter().any(|&v| v < -1e-12 || v > c + 1e-12) {
                continue;
            }
            for (r, &i) in free.iter().enumerate() {
                alpha[i] = x[r].clamp(0.0, c);
            }
        }
        let w = dual_objective(&alpha, y, &k);
        if best.as_ref().is_none_or(|(b, _)| w > *b) {
            best = Some((w, alpha));
        }
    }
    best.expect("the zero vector is always feasible")
}

/// Largest KKT violation of `alpha` with decision values `f` (bias included).
pub fn kkt_residual(alpha: &[f64], y: &[f64], f: &[f64], c: f64) -> f64 {
    alpha
        .iter()
        .zip(y)
        .zip(f)
        .map(|((&a, &yi), &fi)| {
            let m = yi * fi;
            if a <= 0.0 {
                (1.0 - m).max(0.0)
            } else if a >= c {
                (m - 1.0).max(0.0)
            } else {
                (m - 1.0).abs()
            }
        })
        .fold(0.0, f64::max)
}
