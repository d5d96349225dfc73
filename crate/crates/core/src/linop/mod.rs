//! Matrix-free operators with apply counters.

use alloc::vec::Vec;
use core::ops::Sub;
use core::sync::atomic::{AtomicU64, Ordering};

use crate::error::{check_len, Error, Result};
use crate::matrix::Matrix;

mod csr;
mod test_matrix;

pub use csr::CsrOperator;
pub use test_matrix::{
    make_dense_test, make_sparse_test, CirculantStencil, DenseTestMatrix, SparseTestMatrix, LOW_RANK,
};

/// Largest `rows * cols` that [`densify`] will materialize by default.
pub const DEFAULT_DENSIFY_CAP: usize = 1_000_000;

/// Number of applications of `A` and of `A*`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct ApplyCounts {
    pub apply: u64,
    pub adjoint: u64,
}

impl ApplyCounts {
    pub const fn new(apply: u64, adjoint: u64) -> Self {
        Self { apply, adjoint }
    }
}

impl Sub for ApplyCounts {
    type Output = ApplyCounts;

    fn sub(self, rhs: Self) -> Self {
        Self {
            apply: self.apply - rhs.apply,
            adjoint: self.adjoint - rhs.adjoint,
        }
    }
}

/// Monotone, thread-safe counters owned by each operator.
#[derive(Debug, Default)]
pub struct ApplyCounters {
    apply: AtomicU64,
    adjoint: AtomicU64,
}

impl ApplyCounters {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn snapshot(&self) -> ApplyCounts {
        ApplyCounts {
            apply: self.apply.load(Ordering::Relaxed),
            adjoint: self.adjoint.load(Ordering::Relaxed),
        }
    }

    fn record_apply(&self) {
        self.apply.fetch_add(1, Ordering::Relaxed);
    }

    fn record_adjoint(&self) {
        self.adjoint.fetch_add(1, Ordering::Relaxed);
    }
}

/// An `m × n` real matrix known only through products with `A` and `A*`.
///
/// Implementors supply the raw kernels [`matvec`](Self::matvec) and
/// [`matvec_adjoint`](Self::matvec_adjoint), which must overwrite their
/// output completely and must not touch the counters. The provided
/// `apply*` methods check lengths, bump the matching counter by one, and
/// call the kernel; algorithm code only ever goes through those.
pub trait LinearOperator: Sync {
    fn rows(&self) -> usize;
    fn cols(&self) -> usize;
    fn counters(&self) -> &ApplyCounters;

    /// `y = A·x`, uncounted. `x.len() == cols()`, `y.len() == rows()`.
    fn matvec(&self, x: &[f64], y: &mut [f64]);

    /// `x = A*·y`, uncounted. `y.len() == rows()`, `x.len() == cols()`.
    fn matvec_adjoint(&self, y: &[f64], x: &mut [f64]);

    fn counts(&self) -> ApplyCounts {
        self.counters().snapshot()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) -> Result<()> {
        check_len("operator input", self.cols(), x.len())?;
        check_len("operator output", self.rows(), y.len())?;
        self.counters().record_apply();
        self.matvec(x, y);
        Ok(())
    }

    fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        let mut y = alloc::vec![0.0; self.rows()];
        self.apply_into(x, &mut y)?;
        Ok(y)
    }

    fn apply_adjoint_into(&self, y: &[f64], x: &mut [f64]) -> Result<()> {
        check_len("adjoint input", self.rows(), y.len())?;
        check_len("adjoint output", self.cols(), x.len())?;
        self.counters().record_adjoint();
        self.matvec_adjoint(y, x);
        Ok(())
    }

    fn apply_adjoint(&self, y: &[f64]) -> Result<Vec<f64>> {
        let mut x = alloc::vec![0.0; self.cols()];
        self.apply_adjoint_into(y, &mut x)?;
        Ok(x)
    }
}

/// An explicit dense matrix behind the operator interface.
#[derive(Debug)]
pub struct DenseOperator {
    matrix: Matrix,
    counters: ApplyCounters,
}

impl DenseOperator {
    pub fn new(matrix: Matrix) -> Self {
        Self {
            matrix,
            counters: ApplyCounters::new(),
        }
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }
}

impl LinearOperator for DenseOperator {
    fn rows(&self) -> usize {
        self.matrix.rows()
    }

    fn cols(&self) -> usize {
        self.matrix.cols()
    }

    fn counters(&self) -> &ApplyCounters {
        &self.counters
    }

    fn matvec(&self, x: &[f64], y: &mut [f64]) {
        self.matrix.matvec_into(x, y);
    }

    fn matvec_adjoint(&self, y: &[f64], x: &mut [f64]) {
        self.matrix.matvec_transpose_into(y, x);
    }
}

/// Materializes `op` column by column through the uncounted kernel.
pub fn densify<A: LinearOperator + ?Sized>(op: &A) -> Result<Matrix> {
    densify_with_cap(op, DEFAULT_DENSIFY_CAP)
}

pub fn densify_with_cap<A: LinearOperator + ?Sized>(op: &A, cap: usize) -> Result<Matrix> {
    let (m, n) = (op.rows(), op.cols());
    let entries = m.saturating_mul(n);
    if entries > cap {
        return Err(Error::SizeCap { entries, cap });
    }
    let mut out = Matrix::zeros(m, n);
    let mut unit = alloc::vec![0.0; n];
    for j in 0..n {
        unit[j] = 1.0;
        op.matvec(&unit, out.column_mut(j));
        unit[j] = 0.0;
    }
    Ok(out)
}
