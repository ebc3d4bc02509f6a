//! Sequence-to-vector transforms: reduced rank extrapolation (RRE),
//! minimal polynomial extrapolation (MPE), and Wynn's vector
//! epsilon-algorithm (VEA).
//!
//! All three map a short window of iterates from a fixed-point process to
//! an estimate of its limit. RRE and MPE share one computation: form the
//! first differences of the window, factorize them incrementally with
//! Gram-Schmidt, solve a small coefficient system, and combine. The two
//! differ only in that coefficient system. VEA builds the epsilon table
//! recursively using the Samelson inverse v / (v·v).
//!
//! When a difference column turns out to be numerically dependent on the
//! previous ones the sequence admits an exact extrapolation from the
//! leading columns (this is how the transforms terminate on linearly
//! generated sequences). That reduced answer is returned with the
//! `breakdown` flag set rather than failing the whole transform.

use crate::error::{Error, Result};
use crate::numkit::{
    dot, mgs_append, project_onto_basis, solve_normal_from_r, solve_upper, DenseMatrix,
    UpperTriangular,
};

/// Ordered window of iterates s₀, …, s_m from a fixed-point process.
#[derive(Debug, Clone)]
pub struct SequenceWindow {
    dim: usize,
    vectors: Vec<Vec<f64>>,
}

impl SequenceWindow {
    pub fn new(dim: usize) -> Self {
        Self { dim, vectors: Vec::new() }
    }

    pub fn from_vectors(vectors: Vec<Vec<f64>>) -> Result<Self> {
        if vectors.len() < 2 {
            return Err(Error::Dimension(
                "a sequence window needs at least two vectors".into(),
            ));
        }
        let dim = vectors[0].len();
        let mut w = Self::new(dim);
        for v in vectors {
            w.push(v)?;
        }
        Ok(w)
    }

    pub fn push(&mut self, v: Vec<f64>) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::Dimension(format!(
                "vector of length {} pushed into window of dimension {}",
                v.len(),
                self.dim
            )));
        }
        self.vectors.push(v);
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k]
    }

    pub fn last(&self) -> &[f64] {
        self.vectors.last().expect("window is non-empty")
    }

    /// Sub-window holding the trailing `count` vectors.
    pub fn tail(&self, count: usize) -> Result<SequenceWindow> {
        if count > self.len() {
            return Err(Error::Dimension(format!(
                "tail of {count} vectors from a window of {}",
                self.len()
            )));
        }
        SequenceWindow::from_vectors(self.vectors[self.len() - count..].to_vec())
    }
}

/// Which transform produced an outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtrapMethod {
    Rre,
    Mpe,
    Vea,
}

impl std::fmt::Display for ExtrapMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ExtrapMethod::Rre => write!(f, "rre"),
            ExtrapMethod::Mpe => write!(f, "mpe"),
            ExtrapMethod::Vea => write!(f, "vea"),
        }
    }
}

/// Extrapolated vector plus the combination coefficients that produced it.
///
/// For RRE and MPE `gamma` sums to one and `alpha` holds the partial-sum
/// recurrence `alpha[0] = 1 - gamma[0]`, `alpha[j] = alpha[j-1] - gamma[j]`.
/// VEA outcomes carry empty coefficient lists.
#[derive(Debug, Clone)]
pub struct ExtrapolationOutcome {
    pub t: Vec<f64>,
    pub gamma: Vec<f64>,
    pub alpha: Vec<f64>,
    pub method: ExtrapMethod,
    pub breakdown: bool,
}

/// Numerical guards for the transforms. The defaults suit f64 throughout.
#[derive(Debug, Clone, Copy)]
pub struct ExtrapConfig {
    /// Relative threshold for declaring a difference column dependent.
    pub breakdown_tol: f64,
    /// Relative threshold on the coefficient normalization sum.
    pub degeneracy_tol: f64,
    /// Threshold on squared difference norms guarding the Samelson inverse.
    pub vea_guard: f64,
}

impl Default for ExtrapConfig {
    fn default() -> Self {
        Self { breakdown_tol: 1e-14, degeneracy_tol: 1e-14, vea_guard: 1e-28 }
    }
}

/// Matrix of first differences: column i holds s_{i+1} - s_i.
pub fn first_differences(w: &SequenceWindow) -> Result<DenseMatrix> {
    if w.len() < 2 {
        return Err(Error::Dimension(
            "first differences need at least two vectors".into(),
        ));
    }
    let mut m = DenseMatrix::zeros(w.dim(), 0);
    for i in 0..w.len() - 1 {
        let col: Vec<f64> = w
            .vector(i + 1)
            .iter()
            .zip(w.vector(i))
            .map(|(a, b)| a - b)
            .collect();
        m.push_column(&col)?;
    }
    Ok(m)
}

fn vec_sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn vec_add(a: &[f64], b: &[f64]) -> Vec<f64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Turns the coefficient vector `d` into the final outcome:
/// gamma = d / sum(d), alpha by the partial-sum recurrence, and
/// t = s₀ + Q_k (R_k alpha).
fn assemble(
    w: &SequenceWindow,
    q: &DenseMatrix,
    r: &UpperTriangular,
    d: Vec<f64>,
    k: usize,
    method: ExtrapMethod,
    breakdown: bool,
    cfg: &ExtrapConfig,
) -> Result<ExtrapolationOutcome> {
    let lambda: f64 = d.iter().sum();
    let abs_sum: f64 = d.iter().map(|v| v.abs()).sum();
    if lambda.abs() <= cfg.degeneracy_tol * abs_sum {
        return Err(Error::Degenerate(format!(
            "coefficient sum {lambda:.3e} vanishes against magnitude {abs_sum:.3e}"
        )));
    }
    let gamma: Vec<f64> = d.iter().map(|v| v / lambda).collect();
    let mut alpha = Vec::with_capacity(k);
    if k > 0 {
        alpha.push(1.0 - gamma[0]);
        for j in 1..k {
            alpha.push(alpha[j - 1] - gamma[j]);
        }
    }
    let combined = r.apply_leading(k, &alpha);
    let t = vec_add(w.vector(0), &q.combine_columns(k, &combined));
    Ok(ExtrapolationOutcome { t, gamma, alpha, method, breakdown })
}

/// Exact-termination path: column `k` of the difference matrix lies in the
/// span of the previous columns, so the window determines its limit from
/// those columns alone. `rproj` holds the basis coefficients of column `k`.
fn terminate_at(
    w: &SequenceWindow,
    q: &DenseMatrix,
    r: &UpperTriangular,
    rproj: &[f64],
    k: usize,
    method: ExtrapMethod,
    breakdown: bool,
    cfg: &ExtrapConfig,
) -> Result<ExtrapolationOutcome> {
    let rhs: Vec<f64> = rproj.iter().map(|v| -v).collect();
    let mut d = solve_upper(r, &rhs)?;
    d.push(1.0);
    assemble(w, q, r, d, k, method, breakdown, cfg)
}

fn constant_window_outcome(w: &SequenceWindow, method: ExtrapMethod) -> ExtrapolationOutcome {
    ExtrapolationOutcome {
        t: w.vector(0).to_vec(),
        gamma: vec![1.0],
        alpha: Vec::new(),
        method,
        breakdown: true,
    }
}

/// Reduced rank extrapolation over a window of q + 2 vectors.
///
/// Builds the QR factorization of the difference matrix, solves the
/// normal-equation system RᵀR d = (1, …, 1)ᵀ, normalizes, and combines.
/// A dependent difference column short-circuits into the exact-termination
/// path with the breakdown flag set; a dependent first column means the
/// window is constant and s₀ is returned.
pub fn rre(w: &SequenceWindow, cfg: &ExtrapConfig) -> Result<ExtrapolationOutcome> {
    polynomial_extrapolate(w, cfg, ExtrapMethod::Rre)
}

/// Minimal polynomial extrapolation over a window of q + 2 vectors.
///
/// Identical factorization to [`rre`]; the coefficients instead solve the
/// triangular system R_q d = -(Qᵀ Δs_q) with the last coefficient pinned
/// to one.
pub fn mpe(w: &SequenceWindow, cfg: &ExtrapConfig) -> Result<ExtrapolationOutcome> {
    polynomial_extrapolate(w, cfg, ExtrapMethod::Mpe)
}

fn polynomial_extrapolate(
    w: &SequenceWindow,
    cfg: &ExtrapConfig,
    method: ExtrapMethod,
) -> Result<ExtrapolationOutcome> {
    if w.len() < 3 {
        return Err(Error::Dimension(format!(
            "polynomial extrapolation needs at least three vectors, got {}",
            w.len()
        )));
    }
    let q_order = w.len() - 2;
    let mut q = DenseMatrix::zeros(w.dim(), 0);
    let mut r = UpperTriangular::new();
    // For MPE the last difference column is only ever projected, never
    // factorized, so the loop below appends one column less.
    let appended = match method {
        ExtrapMethod::Rre => q_order + 1,
        ExtrapMethod::Mpe => q_order,
        ExtrapMethod::Vea => unreachable!("vea has its own entry point"),
    };
    for c in 0..appended {
        let delta = vec_sub(w.vector(c + 1), w.vector(c));
        match mgs_append(&mut q, &mut r, &delta, cfg.breakdown_tol) {
            Ok(()) => {}
            Err(Error::Breakdown { col, .. }) => {
                if col == 0 {
                    return Ok(constant_window_outcome(w, method));
                }
                let rproj = project_onto_basis(&q, &delta);
                return terminate_at(w, &q, &r, &rproj, col, method, true, cfg);
            }
            Err(e) => return Err(e),
        }
    }
    match method {
        ExtrapMethod::Rre => {
            let d = solve_normal_from_r(&r, &vec![1.0; q_order + 1])?;
            assemble(w, &q, &r, d, q_order, method, false, cfg)
        }
        ExtrapMethod::Mpe => {
            let last = vec_sub(w.vector(q_order + 1), w.vector(q_order));
            let rproj = project_onto_basis(&q, &last);
            terminate_at(w, &q, &r, &rproj, q_order, method, false, cfg)
        }
        ExtrapMethod::Vea => unreachable!(),
    }
}

/// Wynn's vector epsilon-algorithm over a window of exactly 2q + 1 vectors.
///
/// The epsilon table is built column by column from ε₀ = s_j using the
/// Samelson inverse v / (v·v); the top entry of column 2q is the
/// extrapolated approximation. A vanishing difference would blow up the
/// inverse, so construction stops there and the best completed even-column
/// entry is returned with the breakdown flag (for a vanishing difference of
/// the input vectors themselves the window has already converged and the
/// last input vector is returned).
pub fn vea(w: &SequenceWindow, cfg: &ExtrapConfig) -> Result<ExtrapolationOutcome> {
    if w.len() < 3 || w.len() % 2 == 0 {
        return Err(Error::Dimension(format!(
            "vea needs an odd window of at least three vectors, got {}",
            w.len()
        )));
    }
    let two_q = w.len() - 1;
    let outcome = |t: Vec<f64>, breakdown: bool| ExtrapolationOutcome {
        t,
        gamma: Vec::new(),
        alpha: Vec::new(),
        method: ExtrapMethod::Vea,
        breakdown,
    };

    // Rolling storage: only the two most recent columns are needed.
    let mut prev: Vec<Vec<f64>> = vec![vec![0.0; w.dim()]; w.len() + 1]; // ε₋₁
    let mut cur: Vec<Vec<f64>> = (0..w.len()).map(|j| w.vector(j).to_vec()).collect(); // ε₀

    for k in 0..two_q {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for j in 0..cur.len() - 1 {
            let diff = vec_sub(&cur[j + 1], &cur[j]);
            let nsq = dot(&diff, &diff);
            let scale = 1.0 + dot(&cur[j], &cur[j]);
            if nsq < cfg.vea_guard * scale {
                if k == 0 {
                    // The input differences already vanish: converged window.
                    return Ok(outcome(w.last().to_vec(), true));
                }
                // Best entry of the last completed even column: k itself when
                // even, otherwise its predecessor (held in `prev`).
                let entry = if k % 2 == 0 { cur[j].clone() } else { prev[j].clone() };
                return Ok(outcome(entry, true));
            }
            let inv: Vec<f64> = diff.iter().map(|v| v / nsq).collect();
            next.push(vec_add(&prev[j + 1], &inv));
        }
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(outcome(cur[0].clone(), false))
}

/// Generalized residual of a polynomial extrapolation outcome:
/// the gamma-weighted sum of the window's first differences. It equals the
/// exact residual on linear fixed-point problems and serves as a
/// first-order diagnostic on nonlinear ones.
pub fn generalized_residual(
    w: &SequenceWindow,
    outcome: &ExtrapolationOutcome,
) -> Result<Vec<f64>> {
    if outcome.method == ExtrapMethod::Vea || outcome.gamma.is_empty() {
        return Err(Error::Unsupported(
            "the generalized residual is defined for RRE and MPE outcomes only".into(),
        ));
    }
    if outcome.gamma.len() + 1 > w.len() {
        return Err(Error::Dimension(format!(
            "outcome with {} coefficients against window of {} vectors",
            outcome.gamma.len(),
            w.len()
        )));
    }
    let mut res = vec![0.0; w.dim()];
    for (j, &g) in outcome.gamma.iter().enumerate() {
        for (ri, (a, b)) in res.iter_mut().zip(w.vector(j + 1).iter().zip(w.vector(j))) {
            *ri += g * (a - b);
        }
    }
    Ok(res)
}
