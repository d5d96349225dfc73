//! Matrix-free orthogonal projections onto the null space and row space of a
//! short, fat, full-rank matrix.
//!
//! The operator `A` (m × n, m ≤ n) is only ever touched through
//! [`LinearOperator::apply`] and [`LinearOperator::apply_adjoint`]. A random
//! sketch `S = A·G` is factored as `S* = Q·R·Π`; with `P = Π*·R*` the matrix
//! `P⁻¹·A` is well-conditioned with overwhelming probability, which lets the
//! projection `b − A*(A·A*)⁻¹·A·b` be evaluated stably as
//! `b − A*·(P*)⁻¹·Y·P⁻¹·A·b` with `Y = (P⁻¹·A·A*·(P*)⁻¹)⁻¹`.
//!
//! ```
//! use randproj_core::linop::make_sparse_test;
//! use randproj_core::precond::{build_preconditioner, sketch_width_for};
//! use randproj_core::projector::project;
//! use randproj_core::rng::UniformLaggedFibonacci;
//!
//! let a = make_sparse_test(8, 32, 1e4, 7).unwrap();
//! let mut g = UniformLaggedFibonacci::new(11);
//! let pre = build_preconditioner(&a, sketch_width_for(8, 32), &mut g).unwrap();
//! let b = vec![1.0; 32];
//! let out = project(&pre, &a, &b).unwrap();
//! assert_eq!(out.null_projection.len(), 32);
//! ```
#![no_std]

extern crate alloc;

pub mod dense;
pub mod diagnostics;
mod error;
pub mod linop;
pub mod matrix;
pub mod perm;
pub mod precond;
pub mod projector;
pub mod rng;
pub mod vector;

pub use error::{Error, Result};
pub use linop::{ApplyCounters, ApplyCounts, LinearOperator};
pub use matrix::Matrix;
pub use perm::Permutation;
pub use precond::Preconditioner;
pub use projector::ProjectionResult;
