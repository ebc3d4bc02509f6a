//! The two-dimensional Bratu problem on [-3, 3]² with homogeneous
//! Dirichlet boundary data, discretized by the usual five-point Laplacian
//! plus an optional one-sided convection term:
//!
//! f(x) = L x + alpha D x + lambda exp(x),
//!
//! with L = L₁ ⊗ I + I ⊗ L₁ for the tridiagonal stencil L₁ = (-1, 2, -1)
//! and D = D₁ ⊗ I for the upper bidiagonal stencil D₁ = (-1, 1). Data are
//! generated from the Gaussian x(s, t) = exp(-10 (s² + t²)) sampled on the
//! uniform grid, so the residual vanishes exactly at the sampled truth.
//! The stencils are applied as printed, with no grid-spacing factors: data
//! and operator share the same convention, so the benchmark is
//! self-consistent.

use crate::error::{Error, Result};
use crate::numkit::{BandedMatrix, DenseMatrix, KronMode, KroneckerOperator};

use super::{check_x_len, NllsProblem};

/// Arguments to exp are clamped here during trial evaluations; large line
/// search probes can overshoot into overflow territory.
const EXP_CLAMP: f64 = 700.0;

#[inline]
fn safe_exp(v: f64) -> f64 {
    v.min(EXP_CLAMP).exp()
}

/// Grid size, convection and nonlinearity coefficients of a Bratu instance.
/// The domain is fixed to [-3, 3]².
#[derive(Debug, Clone, Copy)]
pub struct BratuSpec {
    /// Grid points per direction (endpoints included); the problem has n² unknowns.
    pub n: usize,
    /// Convection coefficient in front of the first derivative along s.
    pub alpha: f64,
    /// Nonlinearity coefficient; the standard Bratu problem is alpha = 0.
    pub lambda: f64,
}

/// Matrix-free Bratu instance; see the module docs for the operator layout.
pub struct BratuProblem {
    n: usize,
    alpha: f64,
    lambda: f64,
    lap_slow: KroneckerOperator,
    lap_fast: KroneckerOperator,
    conv: KroneckerOperator,
    conv_t: KroneckerOperator,
    x_true: Vec<f64>,
    y: Vec<f64>,
}

/// Builds the Bratu instance for `spec`, sampling the exact solution and
/// generating the data vector through the same discrete operator.
pub fn build_bratu(spec: BratuSpec) -> Result<BratuProblem> {
    if spec.n < 3 {
        return Err(Error::Config(format!(
            "bratu grid needs at least 3 points per direction, got {}",
            spec.n
        )));
    }
    let n = spec.n;
    let l1 = BandedMatrix::tridiagonal(n, -1.0, 2.0, -1.0);
    let d1 = BandedMatrix::upper_bidiagonal(n, -1.0, 1.0);
    let lap_slow = KroneckerOperator::new(l1.clone(), KronMode::LeftFactor);
    let lap_fast = KroneckerOperator::new(l1, KronMode::RightFactor);
    let conv_t = KroneckerOperator::new(d1.transposed(), KronMode::LeftFactor);
    let conv = KroneckerOperator::new(d1, KronMode::LeftFactor);

    // Uniform grid over [-3, 3] including the endpoints, slow index along s.
    let coord = |i: usize| -3.0 + 6.0 * i as f64 / (n - 1) as f64;
    let mut x_true = vec![0.0; n * n];
    for i in 0..n {
        let s = coord(i);
        for j in 0..n {
            let t = coord(j);
            x_true[i * n + j] = (-10.0 * (s * s + t * t)).exp();
        }
    }

    let mut problem = BratuProblem {
        n,
        alpha: spec.alpha,
        lambda: spec.lambda,
        lap_slow,
        lap_fast,
        conv,
        conv_t,
        x_true,
        y: Vec::new(),
    };
    let mut y = vec![0.0; n * n];
    let x_true = problem.x_true.clone();
    problem.eval_f(&x_true, &mut y)?;
    problem.y = y;
    Ok(problem)
}

impl BratuProblem {
    pub fn grid_points(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }
}

impl NllsProblem for BratuProblem {
    fn n_unknowns(&self) -> usize {
        self.n * self.n
    }

    fn n_residuals(&self) -> usize {
        self.n * self.n
    }

    fn data(&self) -> &[f64] {
        &self.y
    }

    fn x_true(&self) -> Option<&[f64]> {
        Some(&self.x_true)
    }

    fn eval_f(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        check_x_len(self, x)?;
        for (o, &xi) in out.iter_mut().zip(x) {
            *o = self.lambda * safe_exp(xi);
        }
        self.lap_slow.apply_add(x, 1.0, out)?;
        self.lap_fast.apply_add(x, 1.0, out)?;
        if self.alpha != 0.0 {
            self.conv.apply_add(x, self.alpha, out)?;
        }
        Ok(())
    }

    fn jac_transpose_apply(&self, x: &[f64], r: &[f64], out: &mut [f64]) -> Result<()> {
        check_x_len(self, x)?;
        check_x_len(self, r)?;
        for ((o, &xi), &ri) in out.iter_mut().zip(x).zip(r) {
            *o = self.lambda * safe_exp(xi) * ri;
        }
        self.lap_slow.apply_add(r, 1.0, out)?;
        self.lap_fast.apply_add(r, 1.0, out)?;
        if self.alpha != 0.0 {
            self.conv_t.apply_add(r, self.alpha, out)?;
        }
        Ok(())
    }

    fn jacobian_diag(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        check_x_len(self, x)?;
        // diag(L) = 4, diag(D) = -1
        for (o, &xi) in out.iter_mut().zip(x) {
            *o = 4.0 - self.alpha + self.lambda * safe_exp(xi);
        }
        Ok(())
    }

    fn jtj_diag(&self, x: &[f64], out: &mut [f64]) -> Result<()> {
        check_x_len(self, x)?;
        let n = self.n;
        for k in 0..n {
            for l in 0..n {
                let p = k * n + l;
                let d = 4.0 - self.alpha + self.lambda * safe_exp(x[p]);
                let mut acc = d * d;
                // column p is touched by rows (k±1, l) and (k, l±1); the
                // convection superdiagonal lands in row (k-1, l)
                if k > 0 {
                    let above = self.alpha - 1.0;
                    acc += above * above;
                }
                if k + 1 < n {
                    acc += 1.0;
                }
                if l > 0 {
                    acc += 1.0;
                }
                if l + 1 < n {
                    acc += 1.0;
                }
                out[p] = acc;
            }
        }
        Ok(())
    }

    fn jacobian_dense(&self, x: &[f64]) -> Option<DenseMatrix> {
        if self.n > 32 || x.len() != self.n_unknowns() {
            return None;
        }
        let nn = self.n_unknowns();
        let mut jac = DenseMatrix::zeros(nn, 0);
        let mut unit = vec![0.0; nn];
        let mut col = vec![0.0; nn];
        for j in 0..nn {
            unit[j] = 1.0;
            col.iter_mut().for_each(|v| *v = 0.0);
            self.lap_slow.apply_add(&unit, 1.0, &mut col).ok()?;
            self.lap_fast.apply_add(&unit, 1.0, &mut col).ok()?;
            if self.alpha != 0.0 {
                self.conv.apply_add(&unit, self.alpha, &mut col).ok()?;
            }
            col[j] += self.lambda * safe_exp(x[j]);
            jac.push_column(&col).ok()?;
            unit[j] = 0.0;
        }
        Some(jac)
    }
}
