//! Functional-discrete solver for Sturm–Liouville eigenproblems
//!
//! ```text
//! u'' + (λ - q(x)) u = N(u),  x ∈ (0, 1), x ≠ α,
//! u(0) = u(1) = 0,  u'(0) = 1,
//! u'(α+0) - u'(α-0) = β u(α),
//! ```
//!
//! with `q ∈ L1(0, 1)` and a polynomial `N` with `N(0) = 0`.
//!
//! The eigenpair is expanded around the `q = 0, N = 0` problem, each term is
//! computed on sinc grids with Stenger's indefinite-integration formula, and
//! every quantity is carried at a configurable decimal precision.
//!
//! ```no_run
//! use fdsl::{problem::reference_example, solver::{run_fd, SolveOptions}};
//!
//! let sol = run_fd(&reference_example(), 1, 10, &SolveOptions::default()).unwrap();
//! println!("{}", sol.lambda_m.to_fixed_string(24));
//! ```

pub mod adomian;
pub mod analysis;
pub mod basic;
pub mod cli;
pub mod error;
pub mod oracle;
pub mod problem;
pub mod scalar;
pub mod sinc;
pub mod solver;

pub use error::{Error, Result};
pub use scalar::Scalar;
