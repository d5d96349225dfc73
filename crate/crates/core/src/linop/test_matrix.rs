//! Benchmark operators: a permuted, block-repeated circulant stencil and the
//! same operator plus a scaled rank-10 term.

use alloc::format;
use alloc::vec::Vec;

use super::{ApplyCounters, LinearOperator};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::perm::Permutation;
use crate::rng::{derive_seed, GaussianStream, SketchSource, SplitMix64};

/// Rank of the low-rank term of [`DenseTestMatrix`].
pub const LOW_RANK: usize = 10;

const ROW_PERM_STREAM: u64 = 1;
const COL_PERM_STREAM: u64 = 2;
const LOW_RANK_STREAM: u64 = 3;

/// Circulant `m × m` matrix with rows `(1, −4, 6+d, −4, 1)` centred on the
/// diagonal, wrapping modulo `m`.
///
/// Entries whose wrapped columns coincide are summed, so the eigenvalues are
/// `d + 4(cos θ − 1)²` with `θ = 2πk/m` for every `m`. For even `m` they
/// span `[d, 16 + d]` exactly and the condition number is `(16 + d)/d`.
#[derive(Clone, Debug, PartialEq)]
pub struct CirculantStencil {
    m: usize,
    shift: f64,
}

impl CirculantStencil {
    pub fn new(m: usize, shift: f64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Config("stencil dimension must be positive".into()));
        }
        if !shift.is_finite() || shift <= 0.0 {
            return Err(Error::Config(format!("diagonal shift must be positive, got {shift}")));
        }
        Ok(Self { m, shift })
    }

    /// Stencil whose condition number is `kappa` (for even `m`).
    pub fn for_condition(m: usize, kappa: f64) -> Result<Self> {
        if !kappa.is_finite() || kappa <= 1.0 {
            return Err(Error::Config(format!("kappa must exceed 1, got {kappa}")));
        }
        Self::new(m, 16.0 / (kappa - 1.0))
    }

    pub fn dim(&self) -> usize {
        self.m
    }

    pub fn shift(&self) -> f64 {
        self.shift
    }

    pub fn diagonal(&self) -> f64 {
        6.0 + self.shift
    }

    pub fn condition(&self) -> f64 {
        (16.0 + self.shift) / self.shift
    }

    /// `y = B·x`. `B` is symmetric, so this is also the adjoint.
    pub fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let m = self.m;
        let diag = self.diagonal();
        for (j, yj) in y.iter_mut().enumerate() {
            let near = x[(j + 1) % m] + x[(j + m - 1) % m];
            let far = x[(j + 2) % m] + x[(j + 2 * m - 2) % m];
            *yj = diag * x[j] - 4.0 * near + far;
        }
    }

    pub fn to_matrix(&self) -> Matrix {
        let m = self.m;
        let mut out = Matrix::zeros(m, m);
        for j in 0..m {
            out[(j, j)] += self.diagonal();
            out[(j, (j + 1) % m)] -= 4.0;
            out[(j, (j + m - 1) % m)] -= 4.0;
            out[(j, (j + 2) % m)] += 1.0;
            out[(j, (j + 2 * m - 2) % m)] += 1.0;
        }
        out
    }
}

/// `A = U · [B | B | … | B] · V` with random permutations `U` (m × m) and
/// `V` (n × n) and `n/m` copies of the stencil `B`.
#[derive(Debug)]
pub struct SparseTestMatrix {
    stencil: CirculantStencil,
    row_perm: Permutation,
    col_perm: Permutation,
    blocks: usize,
    counters: ApplyCounters,
}

impl SparseTestMatrix {
    pub fn new(stencil: CirculantStencil, row_perm: Permutation, col_perm: Permutation) -> Result<Self> {
        let m = stencil.dim();
        if row_perm.len() != m {
            return Err(Error::Config(format!(
                "row permutation has length {}, stencil has {m} rows",
                row_perm.len()
            )));
        }
        let n = col_perm.len();
        if n == 0 || !n.is_multiple_of(m) {
            return Err(Error::Config(format!("n = {n} is not a positive multiple of m = {m}")));
        }
        Ok(Self {
            stencil,
            row_perm,
            col_perm,
            blocks: n / m,
            counters: ApplyCounters::new(),
        })
    }

    pub fn stencil(&self) -> &CirculantStencil {
        &self.stencil
    }

    pub fn row_perm(&self) -> &Permutation {
        &self.row_perm
    }

    pub fn col_perm(&self) -> &Permutation {
        &self.col_perm
    }

    pub fn blocks(&self) -> usize {
        self.blocks
    }

    /// Exact condition number of the operator (for even `m`).
    pub fn kappa(&self) -> f64 {
        self.stencil.condition()
    }
}

impl LinearOperator for SparseTestMatrix {
    fn rows(&self) -> usize {
        self.stencil.dim()
    }

    fn cols(&self) -> usize {
        self.col_perm.len()
    }

    fn counters(&self) -> &ApplyCounters {
        &self.counters
    }

    fn matvec(&self, x: &[f64], y: &mut [f64]) {
        let m = self.rows();
        let cols = self.col_perm.as_slice();
        // block sum of V·x, blocks accumulated left to right
        let mut folded = alloc::vec![0.0; m];
        for block in cols.chunks_exact(m) {
            for (acc, &src) in folded.iter_mut().zip(block) {
                *acc += x[src];
            }
        }
        let mut stenciled = alloc::vec![0.0; m];
        self.stencil.apply_into(&folded, &mut stenciled);
        self.row_perm.apply_into(&stenciled, y);
    }

    fn matvec_adjoint(&self, y: &[f64], x: &mut [f64]) {
        let m = self.rows();
        let mut unpermuted = alloc::vec![0.0; m];
        self.row_perm.apply_adjoint_into(y, &mut unpermuted);
        let mut stenciled = alloc::vec![0.0; m];
        self.stencil.apply_into(&unpermuted, &mut stenciled);
        for block in self.col_perm.as_slice().chunks_exact(m) {
            for (&dst, &v) in block.iter().zip(&stenciled) {
                x[dst] = v;
            }
        }
    }
}

/// `Ã = A + E·F/√(mn)` with Gaussian `E` (m × 10) and `F` (10 × n), applied
/// without forming the dense product.
#[derive(Debug)]
pub struct DenseTestMatrix {
    base: SparseTestMatrix,
    left: Matrix,
    right: Matrix,
    scale: f64,
    counters: ApplyCounters,
}

impl DenseTestMatrix {
    pub fn new(base: SparseTestMatrix, left: Matrix, right: Matrix) -> Result<Self> {
        let (m, n) = (base.rows(), base.cols());
        if left.shape() != (m, LOW_RANK) || right.shape() != (LOW_RANK, n) {
            return Err(Error::Config(format!(
                "low-rank factors must be {m}x{LOW_RANK} and {LOW_RANK}x{n}"
            )));
        }
        Ok(Self {
            base,
            left,
            right,
            scale: 1.0 / libm::sqrt(m as f64 * n as f64),
            counters: ApplyCounters::new(),
        })
    }

    pub fn base(&self) -> &SparseTestMatrix {
        &self.base
    }

    pub fn left(&self) -> &Matrix {
        &self.left
    }

    pub fn right(&self) -> &Matrix {
        &self.right
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Condition number of the sparse part; only a rough estimate for `Ã`.
    pub fn kappa(&self) -> f64 {
        self.base.kappa()
    }
}

impl LinearOperator for DenseTestMatrix {
    fn rows(&self) -> usize {
        self.base.rows()
    }

    fn cols(&self) -> usize {
        self.base.cols()
    }

    fn counters(&self) -> &ApplyCounters {
        &self.counters
    }

    fn matvec(&self, x: &[f64], y: &mut [f64]) {
        self.base.matvec(x, y);
        let mut inner = [0.0; LOW_RANK];
        self.right.matvec_into(x, &mut inner);
        for (k, &t) in inner.iter().enumerate() {
            crate::vector::axpy(self.scale * t, self.left.column(k), y);
        }
    }

    fn matvec_adjoint(&self, y: &[f64], x: &mut [f64]) {
        self.base.matvec_adjoint(y, x);
        let mut inner = [0.0; LOW_RANK];
        self.left.matvec_transpose_into(y, &mut inner);
        for (j, xj) in x.iter_mut().enumerate() {
            *xj += self.scale * crate::vector::dot(self.right.column(j), &inner);
        }
    }
}

fn validate_dims(m: usize, n: usize) -> Result<()> {
    if m < 4 {
        return Err(Error::Config(format!("m must be at least 4, got {m}")));
    }
    if n < m || !n.is_multiple_of(m) {
        return Err(Error::Config(format!("n = {n} is not a positive multiple of m = {m}")));
    }
    Ok(())
}

/// Sparse benchmark operator with condition number `kappa`; the shift is
/// `d = 16/(κ − 1)` and `U`, `V` are Fisher–Yates draws from `seed`.
pub fn make_sparse_test(m: usize, n: usize, kappa: f64, seed: u64) -> Result<SparseTestMatrix> {
    validate_dims(m, n)?;
    let stencil = CirculantStencil::for_condition(m, kappa)?;
    let row_perm = Permutation::random(m, &mut SplitMix64::new(derive_seed(seed, ROW_PERM_STREAM)));
    let col_perm = Permutation::random(n, &mut SplitMix64::new(derive_seed(seed, COL_PERM_STREAM)));
    SparseTestMatrix::new(stencil, row_perm, col_perm)
}

/// Sparse benchmark operator plus a Gaussian rank-10 perturbation scaled by
/// `1/√(mn)`.
pub fn make_dense_test(m: usize, n: usize, kappa: f64, seed: u64) -> Result<DenseTestMatrix> {
    let base = make_sparse_test(m, n, kappa, seed)?;
    let mut g = GaussianStream::new(derive_seed(seed, LOW_RANK_STREAM));
    let left: Vec<f64> = g.column(m * LOW_RANK);
    let right: Vec<f64> = g.column(LOW_RANK * n);
    DenseTestMatrix::new(
        base,
        Matrix::from_column_major(m, LOW_RANK, left)?,
        Matrix::from_column_major(LOW_RANK, n, right)?,
    )
}
