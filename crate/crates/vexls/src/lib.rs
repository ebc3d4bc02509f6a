//! Vector extrapolation coupled with preconditioned gradient descent for
//! nonlinear least-squares problems.
//!
//! The crate has four layers:
//!
//! * [`numkit`] — the small linear-algebra kernels everything else stands
//!   on: an incremental Gram-Schmidt QR, triangular and normal-equation
//!   solves, and matrix-free Kronecker-structured operators.
//! * [`extrapolate`] — sequence-to-vector transforms (reduced rank
//!   extrapolation, minimal polynomial extrapolation, and the vector
//!   epsilon-algorithm) together with the generalized-residual diagnostic.
//! * [`descent`] — gradient-descent steppers with Armijo backtracking, the
//!   restarted drivers that couple them with the transforms, and a damped
//!   Gauss-Newton baseline.
//! * [`problems`] — concrete test instances: the two-dimensional Bratu
//!   problem (with and without convection) and an extremely sparse sine
//!   problem with a rectangular bidiagonal Jacobian.
//!
//! A typical run builds a problem, picks a stepper and a transform, and
//! calls [`descent::restarted_solve`]:
//!
//! ```
//! use vexls::descent::{restarted_solve, ExtrapChoice, SolveConfig, StepMethod, StepperConfig};
//! use vexls::problems::{build_bratu, BratuSpec};
//! use vexls::problems::NllsProblem;
//!
//! let problem = build_bratu(BratuSpec { n: 20, alpha: 1.0, lambda: 10.0 }).unwrap();
//! let stepper = StepperConfig::new(StepMethod::Pgd);
//! let config = SolveConfig::with_extrap(ExtrapChoice::Rre, 4);
//! let x0 = vec![0.0; problem.n_unknowns()];
//! let report = restarted_solve(&problem, &x0, &stepper, &config).unwrap();
//! assert!(report.relative_error.unwrap() < 1e-4);
//! ```

mod error;

pub mod descent;
pub mod extrapolate;
pub mod numkit;
pub mod problems;

pub use error::{Error, Result};
