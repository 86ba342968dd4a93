//! Small dense factorizations for the handful of solves this crate needs.
//! Matrices are row-major `Vec<f64>` and never exceed a few dozen columns.

use crate::error::{Result, SisrError};

/// Lower-triangular Cholesky factor of a symmetric positive definite matrix.
pub(crate) fn cholesky_factor(a: &[f64], n: usize) -> Result<Vec<f64>> {
    debug_assert_eq!(a.len(), n * n);
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut sum = a[i * n + j];
            for k in 0..j {
                sum -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if sum <= 0.0 {
                    return Err(SisrError::Numerical(format!(
                        "matrix is not positive definite at pivot {i}"
                    )));
                }
                l[i * n + i] = sum.sqrt();
            } else {
                l[i * n + j] = sum / l[j * n + j];
            }
        }
    }
    Ok(l)
}

/// Solves `A x = b` for symmetric positive definite `A` via Cholesky.
pub(crate) fn cholesky_solve(a: &[f64], n: usize, b: &[f64]) -> Result<Vec<f64>> {
    debug_assert_eq!(b.len(), n);
    let l = cholesky_factor(a, n)?;
    // forward: L y = b
    let mut x = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            x[i] -= l[i * n + k] * x[k];
        }
        x[i] /= l[i * n + i];
    }
    // backward: L^T x = y
    for i in (0..n).rev() {
        for k in i + 1..n {
            x[i] -= l[k * n + i] * x[k];
        }
        x[i] /= l[i * n + i];
    }
    Ok(x)
}

pub(crate) struct LeastSquares {
    #[allow(dead_code)]
    pub coefficients: Vec<f64>,
    pub rss: f64,
    pub rank_deficient: bool,
}

/// Least squares `min ||y - X c||^2` by Householder QR, without forming
/// normal equations. Columns whose remaining mass falls below `tol` times
/// the largest original column norm carry no pivot and get a zero
/// coefficient; the residual is unaffected because such a column already
/// lies in the span of its predecessors.
pub(crate) fn householder_least_squares(x: &[f64], n: usize, k: usize, y: &[f64]) -> LeastSquares {
    debug_assert_eq!(x.len(), n * k);
    debug_assert_eq!(y.len(), n);
    let mut a = x.to_vec();
    let mut b = y.to_vec();

    let mut max_norm = 0.0_f64;
    for j in 0..k {
        let norm: f64 = (0..n).map(|i| a[i * k + j] * a[i * k + j]).sum::<f64>().sqrt();
        max_norm = max_norm.max(norm);
    }
    let tol = 1e-12 * max_norm.max(1e-300);

    // pivot_row[j] = row holding column j's diagonal, or usize::MAX if skipped
    let mut pivot_row = vec![usize::MAX; k];
    let mut rank_deficient = false;
    let mut r = 0usize; // next pivot row
    for j in 0..k {
        if r >= n {
            rank_deficient = true;
            continue;
        }
        let norm: f64 = (r..n).map(|i| a[i * k + j] * a[i * k + j]).sum::<f64>().sqrt();
        if norm <= tol {
            rank_deficient = true;
            continue;
        }
        // Householder vector v living in rows r..n of column j.
        let alpha = if a[r * k + j] >= 0.0 { -norm } else { norm };
        let mut v: Vec<f64> = (r..n).map(|i| a[i * k + j]).collect();
        v[0] -= alpha;
        let vnorm2: f64 = v.iter().map(|t| t * t).sum();
        if vnorm2 > 0.0 {
            for col in j..k {
                let dot: f64 = (r..n).map(|i| v[i - r] * a[i * k + col]).sum();
                let scale = 2.0 * dot / vnorm2;
                for i in r..n {
                    a[i * k + col] -= scale * v[i - r];
                }
            }
            let dot: f64 = (r..n).map(|i| v[i - r] * b[i]).sum();
            let scale = 2.0 * dot / vnorm2;
            for i in r..n {
                b[i] -= scale * v[i - r];
            }
        }
        a[r * k + j] = alpha;
        pivot_row[j] = r;
        r += 1;
    }

    let rss: f64 = (r..n).map(|i| b[i] * b[i]).sum();

    let mut coefficients = vec![0.0; k];
    for j in (0..k).rev() {
        let row = pivot_row[j];
        if row == usize::MAX {
            continue;
        }
        let mut sum = b[row];
        for l in j + 1..k {
            sum -= a[row * k + l] * coefficients[l];
        }
        coefficients[j] = sum / a[row * k + j];
    }

    LeastSquares {
        coefficients,
        rss,
        rank_deficient,
    }
}
