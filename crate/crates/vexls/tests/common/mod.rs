//! Shared helpers for the integration suites: seeded linearly generated
//! sequences with a known fixed point, and small dense oracles.
#![allow(dead_code)] // each suite uses its own subset

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use vexls::extrapolate::SequenceWindow;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-1.0..1.0)).collect()
}

/// A linear fixed-point iteration s_{k+1} = M s_k + b with controlled
/// spectrum, plus its limit (I - M)⁻¹ b computed by an independent dense
/// solve.
pub struct LinearIteration {
    pub m: DMatrix<f64>,
    pub b: DVector<f64>,
    pub fixed_point: Vec<f64>,
}

impl LinearIteration {
    /// Builds M = Q diag(eigs) Qᵀ for a random orthogonal Q. Chebyshev-like
    /// eigenvalue spacing over [-rho, rho] keeps the iteration matrix well
    /// conditioned while pinning the spectral radius; the minimal
    /// polynomial degree is the number of distinct eigenvalues.
    pub fn with_spread_spectrum(rng: &mut ChaCha8Rng, n: usize, rho: f64) -> Self {
        let eigs: Vec<f64> = (0..n)
            .map(|i| rho * ((2 * i + 1) as f64 * std::f64::consts::PI / (2 * n) as f64).cos())
            .collect();
        Self::from_eigenvalues(rng, &eigs)
    }

    pub fn from_eigenvalues(rng: &mut ChaCha8Rng, eigs: &[f64]) -> Self {
        let n = eigs.len();
        let raw = DMatrix::from_fn(n, n, |_, _| rng.random_range(-1.0..1.0));
        let q = raw.qr().q();
        let m = &q * DMatrix::from_diagonal(&DVector::from_row_slice(eigs)) * q.transpose();
        let b = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
        let sys = DMatrix::identity(n, n) - &m;
        let fixed_point = sys
            .lu()
            .solve(&b)
            .expect("I - M is nonsingular for spectral radius < 1")
            .iter()
            .copied()
            .collect();
        Self { m, b, fixed_point }
    }

    /// The window s_0, …, s_count-1 started from `s0`.
    pub fn window(&self, s0: &[f64], count: usize) -> SequenceWindow {
        let mut vectors = Vec::with_capacity(count);
        let mut s = DVector::from_row_slice(s0);
        vectors.push(s.iter().copied().collect::<Vec<f64>>());
        for _ in 1..count {
            s = &self.m * &s + &self.b;
            vectors.push(s.iter().copied().collect());
        }
        SequenceWindow::from_vectors(vectors).expect("window construction")
    }
}

pub fn rel_err(x: &[f64], reference: &[f64]) -> f64 {
    let num: f64 = x
        .iter()
        .zip(reference)
        .map(|(a, b)| (a - b) * (a - b))
        .sum::<f64>()
        .sqrt();
    let den: f64 = reference.iter().map(|v| v * v).sum::<f64>().sqrt();
    num / den
}
