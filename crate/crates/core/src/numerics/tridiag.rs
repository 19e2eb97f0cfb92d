//! Thomas algorithm for tridiagonal systems.

use crate::error::{Error, Result};
use alloc::vec;
use alloc::vec::Vec;

const PIVOT_MIN: f64 = 1e-14;

/// Solves `A x = rhs` for tridiagonal `A`.
///
/// Row `i` reads `lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1]`, so
/// `lower[0]` and `upper[n-1]` are ignored. All four slices must have the
/// same length.
pub fn tridiag_solve(lower: &[f64], diag: &[f64], upper: &[f64], rhs: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if lower.len() != n || upper.len() != n || rhs.len() != n {
        return Err(Error::InvalidParams(alloc::format!(
            "tridiagonal slices differ in length ({}, {}, {}, {})",
            lower.len(),
            n,
            upper.len(),
            rhs.len()
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let mut c_star = vec![0.0; n];
    let mut d_star = vec![0.0; n];
    let mut pivot = diag[0];
    if pivot.abs() < PIVOT_MIN {
        return Err(Error::SingularPivot { row: 0, pivot });
    }
    c_star[0] = upper[0] / pivot;
    d_star[0] = rhs[0] / pivot;
    for i in 1..n {
        pivot = diag[i] - lower[i] * c_star[i - 1];
        if pivot.abs() < PIVOT_MIN {
            return Err(Error::SingularPivot { row: i, pivot });
        }
        c_star[i] = if i + 1 < n { upper[i] / pivot } else { 0.0 };
        d_star[i] = (rhs[i] - lower[i] * d_star[i - 1]) / pivot;
    }
    let mut x = d_star;
    for i in (0..n - 1).rev() {
        x[i] -= c_star[i] * x[i + 1];
    }
    Ok(x)
}
