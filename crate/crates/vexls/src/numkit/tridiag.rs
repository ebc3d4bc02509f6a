//! Direct solve for symmetric positive definite tridiagonal systems.

use crate::error::{Error, Result};

/// Solves T x = b where T is symmetric tridiagonal with main diagonal
/// `diag` and first off-diagonal `off` (length n - 1), by LDLᵀ without
/// pivoting.
pub fn solve_tridiag_spd(diag: &[f64], off: &[f64], b: &[f64]) -> Result<Vec<f64>> {
    let n = diag.len();
    if off.len() + 1 != n || b.len() != n {
        return Err(Error::Dimension(format!(
            "tridiagonal system: diag {n}, off {}, rhs {}",
            off.len(),
            b.len()
        )));
    }
    let max_diag = diag.iter().fold(0.0f64, |m, d| m.max(d.abs()));
    let mut d = vec![0.0; n];
    let mut l = vec![0.0; n.saturating_sub(1)];
    for i in 0..n {
        let mut di = diag[i];
        if i > 0 {
            di -= l[i - 1] * l[i - 1] * d[i - 1];
        }
        if di.abs() < 1e-14 * max_diag.max(1.0) {
            return Err(Error::Singular(format!(
                "tridiagonal pivot {i} is {di:.3e}"
            )));
        }
        d[i] = di;
        if i + 1 < n {
            l[i] = off[i] / di;
        }
    }
    let mut x = b.to_vec();
    for i in 1..n {
        x[i] -= l[i - 1] * x[i - 1];
    }
    for i in 0..n {
        x[i] /= d[i];
    }
    for i in (0..n.saturating_sub(1)).rev() {
        x[i] -= l[i] * x[i + 1];
    }
    Ok(x)
}
