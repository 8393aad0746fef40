//! Alternating row/column scaling of nonnegative matrices.
//!
//! Rows are normalized to sum exactly 1+ε; the iteration stops as soon as
//! every column sum reaches m/n − ε. Floating point by design: fixed points
//! are irrational, so this is the one numeric corner of the toolkit.

use num::complex::Complex64;
use thiserror::Error;

pub const DEFAULT_EPSILON: f64 = 1e-6;
pub const DEFAULT_MAX_ITERS: usize = 100_000;

#[derive(Debug, Error)]
pub enum ScaleError {
    #[error("matrix entry ({0}, {1}) is negative")]
    NegativeEntry(usize, usize),
    #[error("matrix is empty")]
    Empty,
    #[error("row {0} is identically zero")]
    ZeroRow(usize),
    #[error("no convergence after {iterations} iterations (best min column sum {best_min_col_sum})")]
    NonConvergence {
        iterations: usize,
        best_min_col_sum: f64,
        result: ScalingResult,
    },
}

/// Row/column scaling coefficients with the achieved bounds.
#[derive(Clone, Debug)]
pub struct ScalingResult {
    pub row_coefficients: Vec<f64>,
    pub col_coefficients: Vec<f64>,
    pub epsilon: f64,
    pub min_col_sum: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Product of row sums after each column normalization is a convergence
    /// proxy that must not decrease; a decrease flags an implementation bug.
    pub monotonicity_ok: bool,
}

/// Scale a nonnegative m × n matrix so every row sums to exactly 1+ε and
/// every column sum is at least m/n − ε.
pub fn sinkhorn(
    matrix: &[Vec<f64>],
    epsilon: f64,
    max_iters: usize,
) -> Result<ScalingResult, ScaleError> {
    let m = matrix.len();
    if m == 0 || matrix[0].is_empty() {
        return Err(ScaleError::Empty);
    }
    let n = matrix[0].len();
    for (i, row) in matrix.iter().enumerate() {
        assert_eq!(row.len(), n, "ragged matrix");
        for (j, &v) in row.iter().enumerate() {
            if v < 0.0 {
                return Err(ScaleError::NegativeEntry(i, j));
            }
        }
        if row.iter().all(|&v| v == 0.0) {
            return Err(ScaleError::ZeroRow(i));
        }
    }
    let row_target = 1.0 + epsilon;
    let col_floor = m as f64 / n as f64 - epsilon;
    let col_target = m as f64 / n as f64;

    let mut rho = vec![1.0f64; m];
    let mut gamma = vec![1.0f64; n];
    let mut proxy_prev = f64::NEG_INFINITY;
    let mut monotonicity_ok = true;
    let mut best_min_col = f64::NEG_INFINITY;

    let finish = |rho: &[f64],
                  gamma: &[f64],
                  iterations: usize,
                  min_col: f64,
                  converged: bool,
                  monotonicity_ok: bool| ScalingResult {
        row_coefficients: rho.to_vec(),
        col_coefficients: gamma.to_vec(),
        epsilon,
        min_col_sum: min_col,
        iterations,
        converged,
        monotonicity_ok,
    };

    for iter in 1..=max_iters {
        // Row normalization to exactly 1+ε.
        for i in 0..m {
            let s: f64 = (0..n).map(|j| matrix[i][j] * gamma[j]).sum();
            debug_assert!(s > 0.0);
            rho[i] = row_target / s;
        }
        // Column check.
        let mut min_col = f64::INFINITY;
        for j in 0..n {
            let s: f64 = (0..m).map(|i| matrix[i][j] * rho[i]).sum();
            let c = s * gamma[j];
            if c < min_col {
                min_col = c;
            }
        }
        best_min_col = best_min_col.max(min_col);
        if min_col >= col_floor {
            return Ok(finish(&rho, &gamma, iter, min_col, true, monotonicity_ok));
        }
        // Column normalization toward m/n.
        for j in 0..n {
            let s: f64 = (0..m).map(|i| matrix[i][j] * rho[i]).sum();
            if s > 0.0 {
                gamma[j] = col_target / s;
            }
        }
        // Convergence proxy: geometric mean of row sums (relative to target)
        // after the column step.
        let mut proxy = 0.0f64;
        for i in 0..m {
            let s: f64 = (0..n).map(|j| matrix[i][j] * rho[i] * gamma[j]).sum();
            proxy += (s / row_target).ln();
        }
        if proxy < proxy_prev - 1e-9 {
            monotonicity_ok = false;
        }
        proxy_prev = proxy;
    }

    // One final row normalization so the reported state satisfies the exact
    // row-sum convention.
    for i in 0..m {
        let s: f64 = (0..n).map(|j| matrix[i][j] * gamma[j]).sum();
        rho[i] = row_target / s;
    }
    let mut min_col = f64::INFINITY;
    for j in 0..n {
        let s: f64 = (0..m).map(|i| matrix[i][j] * rho[i]).sum();
        min_col = min_col.min(s * gamma[j]);
    }
    let result = finish(
        &rho,
        &gamma,
        max_iters,
        min_col,
        false,
        monotonicity_ok,
    );
    Err(ScaleError::NonConvergence {
        iterations: max_iters,
        best_min_col_sum: best_min_col.max(min_col),
        result,
    })
}

/// ℓ2 scaling of a complex matrix: run the nonnegative scaling on squared
/// moduli and take square roots of the coefficients. Row ℓ2² sums become
/// exactly 1+ε, column ℓ2² sums at least m/n − ε; rank is unchanged.
pub fn l2_scale(
    matrix: &[Vec<Complex64>],
    epsilon: f64,
    max_iters: usize,
) -> Result<(Vec<Vec<Complex64>>, ScalingResult), ScaleError> {
    let squared: Vec<Vec<f64>> = matrix
        .iter()
        .map(|row| row.iter().map(|z| z.norm_sqr()).collect())
        .collect();
    let result = sinkhorn(&squared, epsilon, max_iters)?;
    let scaled = apply_l2(matrix, &result);
    Ok((scaled, result))
}

/// Apply ℓ2 scaling coefficients to the complex matrix.
pub fn apply_l2(matrix: &[Vec<Complex64>], result: &ScalingResult) -> Vec<Vec<Complex64>> {
    matrix
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let ri = result.row_coefficients[i].sqrt();
            row.iter()
                .enumerate()
                .map(|(j, z)| z * ri * result.col_coefficients[j].sqrt())
                .collect()
        })
        .collect()
}
