//! Dense column-major matrices, packed upper triangles, and the
//! incremental Gram-Schmidt QR used by the extrapolation transforms.

use crate::error::{Error, Result};

/// Relative threshold below which a QR column counts as dependent.
pub const BREAKDOWN_TOL: f64 = 1e-14;

/// Relative threshold below which a triangular diagonal counts as zero.
pub const SINGULARITY_TOL: f64 = 1e-14;

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn norm2(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// Dense matrix stored column-major so that columns can be appended cheaply.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![0.0; rows * cols] }
    }

    pub fn from_columns(rows: usize, columns: &[Vec<f64>]) -> Result<Self> {
        let mut m = Self::zeros(rows, 0);
        for c in columns {
            m.push_column(c)?;
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.rows..(j + 1) * self.rows]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.rows + i]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[j * self.rows + i] = v;
    }

    pub fn push_column(&mut self, col: &[f64]) -> Result<()> {
        if col.len() != self.rows {
            return Err(Error::Dimension(format!(
                "column of length {} pushed onto matrix with {} rows",
                col.len(),
                self.rows
            )));
        }
        self.data.extend_from_slice(col);
        self.cols += 1;
        Ok(())
    }

    /// Linear combination of the leading `k` columns.
    pub fn combine_columns(&self, k: usize, coeffs: &[f64]) -> Vec<f64> {
        assert!(k <= self.cols && coeffs.len() >= k);
        let mut out = vec![0.0; self.rows];
        for (j, &c) in coeffs.iter().take(k).enumerate() {
            axpy(c, self.column(j), &mut out);
        }
        out
    }

    pub fn transposed(&self) -> DenseMatrix {
        let mut t = DenseMatrix::zeros(self.cols, self.rows);
        for j in 0..self.cols {
            for i in 0..self.rows {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// y = A x.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        assert_eq!(x.len(), self.cols);
        self.combine_columns(self.cols, x)
    }
}

/// Upper triangular matrix packed by columns (column `j` holds `j + 1` entries).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct UpperTriangular {
    order: usize,
    data: Vec<f64>,
}

impl UpperTriangular {
    pub fn new() -> Self {
        Self::default()
    }

    /// Builds the triangle from a full square layout given row by row;
    /// strictly lower entries are ignored.
    pub fn from_rows(order: usize, rows: &[Vec<f64>]) -> Self {
        let mut t = Self::new();
        for j in 0..order {
            let col: Vec<f64> = (0..=j).map(|i| rows[i][j]).collect();
            t.push_column(&col);
        }
        t
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if i > j {
            0.0
        } else {
            self.data[j * (j + 1) / 2 + i]
        }
    }

    pub fn diag(&self, j: usize) -> f64 {
        self.get(j, j)
    }

    /// Appends one column; `col` must hold `order + 1` entries.
    pub fn push_column(&mut self, col: &[f64]) {
        assert_eq!(col.len(), self.order + 1, "triangular column length");
        self.data.extend_from_slice(col);
        self.order += 1;
    }

    /// y = R_k v where R_k is the leading `k` by `k` block.
    pub fn apply_leading(&self, k: usize, v: &[f64]) -> Vec<f64> {
        assert!(k <= self.order && v.len() >= k);
        let mut out = vec![0.0; k];
        for i in 0..k {
            let mut acc = 0.0;
            for j in i..k {
                acc += self.get(i, j) * v[j];
            }
            out[i] = acc;
        }
        out
    }

    fn check_nonsingular(&self, k: usize) -> Result<()> {
        let max_diag = (0..k).map(|j| self.diag(j).abs()).fold(0.0, f64::max);
        for j in 0..k {
            if self.diag(j).abs() < SINGULARITY_TOL * max_diag || max_diag == 0.0 {
                return Err(Error::Singular(format!(
                    "diagonal entry {j} is {:.3e} against max {:.3e}",
                    self.diag(j),
                    max_diag
                )));
            }
        }
        Ok(())
    }
}

/// Solves R x = b by back substitution over the leading block of
/// dimension `b.len()`.
pub fn solve_upper(r: &UpperTriangular, b: &[f64]) -> Result<Vec<f64>> {
    let k = b.len();
    if k > r.order() {
        return Err(Error::Dimension(format!(
            "rhs of length {k} against triangle of order {}",
            r.order()
        )));
    }
    r.check_nonsingular(k)?;
    let mut x = b.to_vec();
    for i in (0..k).rev() {
        let mut acc = x[i];
        for j in i + 1..k {
            acc -= r.get(i, j) * x[j];
        }
        x[i] = acc / r.get(i, i);
    }
    Ok(x)
}

/// Solves Rᵀ z = b by forward substitution over the leading block.
pub fn solve_upper_transpose(r: &UpperTriangular, b: &[f64]) -> Result<Vec<f64>> {
    let k = b.len();
    if k > r.order() {
        return Err(Error::Dimension(format!(
            "rhs of length {k} against triangle of order {}",
            r.order()
        )));
    }
    r.check_nonsingular(k)?;
    let mut z = b.to_vec();
    for i in 0..k {
        let mut acc = z[i];
        for j in 0..i {
            acc -= r.get(j, i) * z[j];
        }
        z[i] = acc / r.get(i, i);
    }
    Ok(z)
}

/// Solves RᵀR d = b as two triangular solves.
pub fn solve_normal_from_r(r: &UpperTriangular, b: &[f64]) -> Result<Vec<f64>> {
    let z = solve_upper_transpose(r, b)?;
    solve_upper(r, &z)
}

/// Projects `v` onto the column span of `q`, returning the coefficients
/// and the orthogonal remainder. One re-orthogonalization pass.
fn orthogonalize(q: &DenseMatrix, v: &[f64]) -> (Vec<f64>, Vec<f64>) {
    let k = q.cols();
    let mut w = v.to_vec();
    let mut coeffs = vec![0.0; k];
    for _ in 0..2 {
        for i in 0..k {
            let qi = q.column(i);
            let c = dot(qi, &w);
            coeffs[i] += c;
            axpy(-c, qi, &mut w);
        }
    }
    (coeffs, w)
}

/// Coefficients of `v` in the orthonormal basis `q` (Qᵀv, refined once).
pub fn project_onto_basis(q: &DenseMatrix, v: &[f64]) -> Vec<f64> {
    orthogonalize(q, v).0
}

/// Appends `v` to the incremental QR factorization held in (`q`, `r`)
/// using modified Gram-Schmidt with one re-orthogonalization pass.
///
/// On success `q` gains one orthonormal column and `r` one column, so that
/// the enlarged product still reconstructs every appended vector. Returns
/// `Error::Breakdown` (leaving `q` and `r` untouched) when the remainder of
/// `v` after orthogonalization falls below `breakdown_tol * ||v||`.
pub fn mgs_append(
    q: &mut DenseMatrix,
    r: &mut UpperTriangular,
    v: &[f64],
    breakdown_tol: f64,
) -> Result<()> {
    if v.len() != q.rows() {
        return Err(Error::Dimension(format!(
            "vector of length {} appended to basis of length {}",
            v.len(),
            q.rows()
        )));
    }
    if q.cols() != r.order() {
        return Err(Error::Dimension(format!(
            "basis has {} columns but triangle has order {}",
            q.cols(),
            r.order()
        )));
    }
    let (mut coeffs, mut w) = orthogonalize(q, v);
    let wnorm = norm2(&w);
    if wnorm <= breakdown_tol * norm2(v) {
        return Err(Error::Breakdown { col: q.cols(), residual: wnorm });
    }
    for wi in w.iter_mut() {
        *wi /= wnorm;
    }
    q.push_column(&w)?;
    coeffs.push(wnorm);
    r.push_column(&coeffs);
    Ok(())
}

/// Least-squares solution of min ||b - A x|| via Gram-Schmidt QR of A.
///
/// For a wide matrix (fewer rows than columns) only the leading square
/// block is factorized and the trailing unknowns are pinned to zero (the
/// basic solution of the underdetermined system). A dependent column maps
/// to `Error::Singular`.
pub fn least_squares_qr(a: &DenseMatrix, b: &[f64]) -> Result<Vec<f64>> {
    if b.len() != a.rows() {
        return Err(Error::Dimension(format!(
            "rhs of length {} against {} rows",
            b.len(),
            a.rows()
        )));
    }
    let rank_tol = 1e-12;
    let singular = |e| match e {
        Error::Breakdown { col, residual } => Error::Singular(format!(
            "matrix column {col} is rank deficient (residual {residual:.3e})"
        )),
        other => other,
    };
    let used = a.cols().min(a.rows());
    let mut q = DenseMatrix::zeros(a.rows(), 0);
    let mut r = UpperTriangular::new();
    for j in 0..used {
        mgs_append(&mut q, &mut r, a.column(j), rank_tol).map_err(singular)?;
    }
    let c: Vec<f64> = (0..used).map(|j| dot(q.column(j), b)).collect();
    let mut x = solve_upper(&r, &c)?;
    x.resize(a.cols(), 0.0);
    Ok(x)
}
