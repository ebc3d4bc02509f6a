//! Banded square matrices and matrix-free Kronecker-structured operators.

use crate::error::{Error, Result};

use super::dense::DenseMatrix;

/// Square banded matrix stored by diagonals.
#[derive(Debug, Clone)]
pub struct BandedMatrix {
    n: usize,
    lower: usize,
    upper: usize,
    /// `diags[d]` is the diagonal at offset `d - lower`, holding
    /// `n - |offset|` entries indexed by `min(row, col)`.
    diags: Vec<Vec<f64>>,
}

impl BandedMatrix {
    pub fn new(n: usize, lower: usize, upper: usize) -> Self {
        let diags = (0..lower + upper + 1)
            .map(|d| {
                let offset = d as isize - lower as isize;
                vec![0.0; n - offset.unsigned_abs()]
            })
            .collect();
        Self { n, lower, upper, diags }
    }

    /// Constant tridiagonal matrix.
    pub fn tridiagonal(n: usize, sub: f64, diag: f64, sup: f64) -> Self {
        let mut m = Self::new(n, 1, 1);
        m.diags[0] = vec![sub; n - 1];
        m.diags[1] = vec![diag; n];
        m.diags[2] = vec![sup; n - 1];
        m
    }

    /// Constant upper bidiagonal matrix; the last row holds only the
    /// diagonal entry.
    pub fn upper_bidiagonal(n: usize, diag: f64, sup: f64) -> Self {
        let mut m = Self::new(n, 0, 1);
        m.diags[0] = vec![diag; n];
        m.diags[1] = vec![sup; n - 1];
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let offset = j as isize - i as isize;
        if offset < -(self.lower as isize) || offset > self.upper as isize {
            return 0.0;
        }
        self.diags[(offset + self.lower as isize) as usize][i.min(j)]
    }

    pub fn transposed(&self) -> BandedMatrix {
        let mut t = BandedMatrix::new(self.n, self.upper, self.lower);
        for (d, diag) in self.diags.iter().enumerate() {
            let offset = d as isize - self.lower as isize;
            let td = (-offset + self.upper as isize) as usize;
            t.diags[td] = diag.clone();
        }
        t
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut m = DenseMatrix::zeros(self.n, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(i, j, self.get(i, j));
            }
        }
        m
    }

    /// y = A x.
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        assert_eq!(x.len(), self.n);
        assert_eq!(out.len(), self.n);
        for i in 0..self.n {
            let lo = i.saturating_sub(self.lower);
            let hi = (i + self.upper).min(self.n - 1);
            let mut acc = 0.0;
            for j in lo..=hi {
                acc += self.get(i, j) * x[j];
            }
            out[i] = acc;
        }
    }
}

/// Which slot of the Kronecker product the banded factor occupies.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KronMode {
    /// A ⊗ I: the factor couples grid lines along the slow index.
    LeftFactor,
    /// I ⊗ A: the factor acts within each grid line (fast index).
    RightFactor,
}

/// An n² by n² operator of the form A ⊗ I or I ⊗ A, applied without ever
/// materializing the product. Vectors are read as n by n grids with the
/// slow index first.
#[derive(Debug, Clone)]
pub struct KroneckerOperator {
    factor: BandedMatrix,
    mode: KronMode,
}

impl KroneckerOperator {
    pub fn new(factor: BandedMatrix, mode: KronMode) -> Self {
        Self { factor, mode }
    }

    /// Grid points per direction.
    pub fn n(&self) -> usize {
        self.factor.n()
    }

    /// Total operator dimension (n²).
    pub fn dim(&self) -> usize {
        self.factor.n() * self.factor.n()
    }

    pub fn factor(&self) -> &BandedMatrix {
        &self.factor
    }

    pub fn mode(&self) -> KronMode {
        self.mode
    }

    /// out += alpha * (op x), panel by panel.
    pub fn apply_add(&self, x: &[f64], alpha: f64, out: &mut [f64]) -> Result<()> {
        let n = self.factor.n();
        if x.len() != n * n || out.len() != n * n {
            return Err(Error::Dimension(format!(
                "kronecker operator of dimension {} applied to vector of length {}",
                n * n,
                x.len()
            )));
        }
        let a = &self.factor;
        match self.mode {
            KronMode::LeftFactor => {
                for i in 0..n {
                    let lo = i.saturating_sub(a.lower);
                    let hi = (i + a.upper).min(n - 1);
                    for k in lo..=hi {
                        let c = alpha * a.get(i, k);
                        if c == 0.0 {
                            continue;
                        }
                        let src = &x[k * n..(k + 1) * n];
                        let dst = &mut out[i * n..(i + 1) * n];
                        for (d, s) in dst.iter_mut().zip(src) {
                            *d += c * s;
                        }
                    }
                }
            }
            KronMode::RightFactor => {
                for block in 0..n {
                    let src = &x[block * n..(block + 1) * n];
                    let dst = &mut out[block * n..(block + 1) * n];
                    for i in 0..n {
                        let lo = i.saturating_sub(a.lower);
                        let hi = (i + a.upper).min(n - 1);
                        let mut acc = 0.0;
                        for k in lo..=hi {
                            acc += a.get(i, k) * src[k];
                        }
                        dst[i] += alpha * acc;
                    }
                }
            }
        }
        Ok(())
    }
}

/// y = op x without forming the n² by n² matrix.
pub fn kron_apply(op: &KroneckerOperator, x: &[f64]) -> Result<Vec<f64>> {
    let mut out = vec![0.0; op.dim()];
    op.apply_add(x, 1.0, &mut out)?;
    Ok(out)
}
