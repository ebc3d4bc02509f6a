//! Minimal dense and structured linear-algebra kernels: incremental
//! Gram-Schmidt QR, triangular and normal-equation solves, and
//! Kronecker-structured operators applied matrix-free.

mod banded;
mod dense;
mod tridiag;

pub use banded::{kron_apply, BandedMatrix, KronMode, KroneckerOperator};
pub use dense::{
    dot, least_squares_qr, mgs_append, norm2, project_onto_basis, solve_normal_from_r,
    solve_upper, solve_upper_transpose, DenseMatrix, UpperTriangular, BREAKDOWN_TOL,
    SINGULARITY_TOL,
};
pub use tridiag::solve_tridiag_spd;
