//! An extremely sparse nonlinear problem: n unknowns, n - 1 residuals
//! f_i(x) = sin(x_i + x_{i+1}), with a bidiagonal rectangular Jacobian.
//! Data come from sampling t ↦ sin(t) / 2 on an equispaced interior grid
//! of (-π, π).

use crate::error::{Error, Result};
use crate::numkit::DenseMatrix;

use super::{check_x_len, NllsProblem};

pub struct SparseSineProblem {
    n: usize,
    x_true: Vec<f64>,
    y: Vec<f64>,
}

/// Builds the sparse sine instance with `n` unknowns.
pub fn build_sparse_sine(n: usize) -> Result<SparseSineProblem> {
    if n < 2 {
        return Err(Error::Config(format!(
            "the sparse sine problem needs at least 2 unknowns, got {n}"
        )));
    }
    let x_true: Vec<f64> = (1..=n)
        .map(|i| {
            let t = -std::f64::consts::PI
                + 2.0 * std::f64::consts::PI * i as f64 / (n + 1) as f64;
            0.5 * t.sin()
        })
        .collect();
    let mut y = vec![0.0; n - 1];
    for i in 0..n - 1 {
        y[i] = (x_true[i] + x_true[i + 1]).sin();
    }
    Ok(SparseSineProblem { n, x_true, y })
}

impl SparseSineProblem {
    /// cos(x_i + x_{i+1}): the single value repeated across row i.
    fn row_weights(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n - 1).map(|i| (x[i] + x[i + 1]).cos()).collect()
    }
}

impl NllsProblem for SparseSineProblem {
    fn n_unknowns(&self) -> usize {
        self.n
    }

    fn n_residuals(&self) -> usize {
        self.n - 1
    }

    fn data(&self) -> &[f64] {
        &self.y
    }

    fn x_true(&self) -> Option<&[f64]> {
        Some(&self.x_true)
    }

    fn eval_f(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        check_x_len(self, x)?;
        if out.len() != self.n - 1 {
            return Err(Error::Dimension(format!(
                "residual buffer of length {} for {} residuals",
                out.len(),
                self.n - 1
            )));
        }
        for i in 0..self.n - 1 {
            out[i] = (x[i] + x[i + 1]).sin();
        }
        Ok(())
    }

    fn jac_transpose_apply(&self, x: &[f64], r: &[f64], out: &mut [f64]) -> Result<()> {
        check_x_len(self, x)?;
        if r.len() != self.n - 1 || out.len() != self.n {
            return Err(Error::Dimension(format!(
                "transpose apply with residual {} and output {}",
                r.len(),
                out.len()
            )));
        }
        let c = self.row_weights(x);
        for j in 0..self.n {
            let mut acc = 0.0;
            if j > 0 {
                acc += c[j - 1] * r[j - 1];
            }
            if j < self.n - 1 {
                acc += c[j] * r[j];
            }
            out[j] = acc;
        }
        Ok(())
    }

    fn jacobian_diag(&self, _x: &[f64], _out: &mut [f64]) -> Result<()> {
        Err(Error::Shape(
            "the sparse sine Jacobian is rectangular; no diagonal preconditioner exists".into(),
        ))
    }

    fn jtj_diag(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        check_x_len(self, x)?;
        let c = self.row_weights(x);
        for j in 0..self.n {
            let mut acc = 0.0;
            if j > 0 {
                acc += c[j - 1] * c[j - 1];
            }
            if j < self.n - 1 {
                acc += c[j] * c[j];
            }
            out[j] = acc;
        }
        Ok(())
    }

    fn jacobian_dense(&self, x: &[f64]) -> Option<DenseMatrix> {
        if self.n > 600 || x.len() != self.n {
            return None;
        }
        let c = self.row_weights(x);
        let mut jac = DenseMatrix::zeros(self.n - 1, 0);
        let mut col = vec![0.0; self.n - 1];
        for j in 0..self.n {
            col.iter_mut().for_each(|v| *v = 0.0);
            if j > 0 {
                col[j - 1] = c[j - 1];
            }
            if j < self.n - 1 {
                col[j] = c[j];
            }
            jac.push_column(&col).ok()?;
        }
        Some(jac)
    }

    fn basic_gram_tridiag(&self, x: &[f64]) -> Option<(Vec<f64>, Vec<f64>)> {
        if x.len() != self.n {
            return None;
        }
        // J₁ drops the last column, so row i keeps c_i at (i, i) and, for
        // i < n - 2, at (i, i + 1).
        let c = self.row_weights(x);
        let m = self.n - 1;
        let diag: Vec<f64> = (0..m)
            .map(|j| {
                let mut acc = c[j] * c[j];
                if j > 0 {
                    acc += c[j - 1] * c[j - 1];
                }
                acc
            })
            .collect();
        let off: Vec<f64> = (0..m - 1).map(|j| c[j] * c[j]).collect();
        Some((diag, off))
    }
}
