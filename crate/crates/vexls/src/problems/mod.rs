//! Concrete nonlinear least-squares instances behind one problem
//! interface: the two-dimensional Bratu problem (extended and standard)
//! and an extremely sparse sine problem with a bidiagonal Jacobian.

mod bratu;
mod sparse_sine;

pub use bratu::{build_bratu, BratuProblem, BratuSpec};
pub use sparse_sine::{build_sparse_sine, SparseSineProblem};

use crate::error::{Error, Result};
use crate::numkit::DenseMatrix;

/// A nonlinear least-squares instance: data `y`, the residual map `f`, and
/// the Jacobian products the solvers need. Implementations are immutable
/// after construction and all evaluators are pure.
pub trait NllsProblem: Send + Sync {
    fn n_unknowns(&self) -> usize;
    fn n_residuals(&self) -> usize;

    /// The observed data `y` the residual is measured against.
    fn data(&self) -> &[f64];

    /// The sampled exact solution, when the instance was built from one.
    fn x_true(&self) -> Option<&[f64]> {
        None
    }

    /// out = f(x).
    fn eval_f(&self, x: &[f64], out: &mut [f64]) -> Result<()>;

    /// out = J_f(x)ᵀ r.
    fn jac_transpose_apply(&self, x: &[f64], r: &[f64], out: &mut [f64]) -> Result<()>;

    /// out = diag(J_f(x)). Defined only for square Jacobians; rectangular
    /// problems answer with a shape error.
    fn jacobian_diag(&self, x: &[f64], out: &mut [f64]) -> Result<()>;

    /// out = diag(J_f(x)ᵀ J_f(x)), computed from the sparsity structure
    /// without forming the product.
    fn jtj_diag(&self, x: &[f64], out: &mut [f64]) -> Result<()>;

    /// Densely assembled Jacobian for small instances; `None` when the
    /// instance is too large to materialize.
    fn jacobian_dense(&self, _x: &[f64]) -> Option<DenseMatrix> {
        None
    }

    /// Tridiagonal bands (diagonal, off-diagonal) of J₁ᵀ J₁, where J₁ is
    /// the leading square block of a wide banded Jacobian. Lets
    /// Gauss-Newton form its basic linearized step through sparse normal
    /// equations when the Jacobian is too large to assemble.
    fn basic_gram_tridiag(&self, _x: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
        None
    }
}

fn check_x_len(p: &(impl NllsProblem + ?Sized), x: &[f64]) -> Result<()> {
    if x.len() != p.n_unknowns() {
        return Err(Error::Dimension(format!(
            "point of length {} for a problem with {} unknowns",
            x.len(),
            p.n_unknowns()
        )));
    }
    Ok(())
}

/// Validates the analytic Jacobian-transpose product against central finite
/// differences of x ↦ ⟨f(x), r⟩ for a fixed pseudorandom probe r, returning
/// the largest per-component relative discrepancy.
pub fn finite_difference_jacobian_check(
    p: &(impl NllsProblem + ?Sized),
    x: &[f64],
    h: f64,
) -> Result<f64> {
    check_x_len(p, x)?;
    let n = p.n_unknowns();
    let m = p.n_residuals();

    // Deterministic probe in [-1, 1).
    let mut state = 0x9e3779b97f4a7c15u64 ^ (n as u64).rotate_left(17) ^ (m as u64);
    let mut next = move || {
        state = state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^= z >> 31;
        ((z >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    };
    let probe: Vec<f64> = (0..m).map(|_| next()).collect();

    let mut analytic = vec![0.0; n];
    p.jac_transpose_apply(x, &probe, &mut analytic)?;

    let mut fx = vec![0.0; m];
    let mut point = x.to_vec();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        let xi = point[i];
        point[i] = xi + h;
        p.eval_f(&point, &mut fx)?;
        let plus: f64 = fx.iter().zip(&probe).map(|(a, b)| a * b).sum();
        point[i] = xi - h;
        p.eval_f(&point, &mut fx)?;
        let minus: f64 = fx.iter().zip(&probe).map(|(a, b)| a * b).sum();
        point[i] = xi;
        let fd = (plus - minus) / (2.0 * h);
        let rel = (fd - analytic[i]).abs() / (1.0 + analytic[i].abs());
        worst = worst.max(rel);
    }
    Ok(worst)
}
