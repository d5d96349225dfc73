//! Randomized preconditioner `P = Π*·R*` and the inverse Gram matrix `Y`.
//!
//! Construction applies `A` exactly `l + m` times and `A*` exactly `m`
//! times: `l` applies to form the sketch `S = A·G` one column of `G` at a
//! time, then one `A*`/`A` pair per column of `X = P⁻¹·A·A*·(P*)⁻¹`.

use alloc::format;

use crate::dense::{invert_small, qr_pivoted, solve_upper_adjoint_in_place, solve_upper_in_place};
use crate::error::{Error, Result};
use crate::linop::{ApplyCounts, LinearOperator};
use crate::matrix::Matrix;
use crate::perm::Permutation;
use crate::rng::{derive_seed, SketchKind, SketchRng, SketchSource};

/// Build attempts made by [`build_preconditioner_with_retry`].
pub const MAX_BUILD_ATTEMPTS: usize = 3;

/// Everything needed to project once `A` has been sketched.
#[derive(Clone, Debug)]
pub struct Preconditioner {
    r: Matrix,
    perm: Permutation,
    y: Matrix,
    sketch_width: usize,
    rows: usize,
    cols: usize,
    build_counts: ApplyCounts,
}

impl Preconditioner {
    /// Upper-triangular `R` from the pivoted QR of `S*`.
    pub fn r(&self) -> &Matrix {
        &self.r
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    /// `Y = (P⁻¹·A·A*·(P*)⁻¹)⁻¹`, symmetric.
    pub fn y(&self) -> &Matrix {
        &self.y
    }

    pub fn sketch_width(&self) -> usize {
        self.sketch_width
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Operator applications spent during construction.
    pub fn build_counts(&self) -> ApplyCounts {
        self.build_counts
    }

    /// `P⁻¹·v = (R*)⁻¹·Π·v`, in place.
    pub fn apply_inverse(&self, v: &mut [f64]) -> Result<()> {
        crate::error::check_len("preconditioner input", self.rows, v.len())?;
        let permuted = self.perm.apply(v)?;
        v.copy_from_slice(&permuted);
        solve_upper_adjoint_in_place(&self.r, v)
    }

    pub(crate) fn check_operator<A: LinearOperator + ?Sized>(&self, a: &A) -> Result<()> {
        if a.rows() != self.rows || a.cols() != self.cols {
            return Err(Error::Dimension {
                what: "operator shape for this preconditioner",
                expected: self.rows * self.cols,
                found: a.rows() * a.cols(),
            });
        }
        Ok(())
    }
}

/// Suggested sketch width `l = m + 4`.
pub fn default_sketch_width(m: usize) -> usize {
    m + 4
}

/// `min(m + 4, n)`, the default clamped to the admissible range.
pub fn sketch_width_for(m: usize, n: usize) -> usize {
    default_sketch_width(m).min(n)
}

fn check_width(m: usize, l: usize, n: usize) -> Result<()> {
    if m == 0 || m > l || l > n {
        return Err(Error::Config(format!(
            "sketch width must satisfy 1 <= m <= l <= n, got m = {m}, l = {l}, n = {n}"
        )));
    }
    Ok(())
}

/// `S = A·G` (m × l), generating and applying one column of `G` at a time.
pub fn build_sketch<A, G>(a: &A, l: usize, g: &mut G) -> Result<Matrix>
where
    A: LinearOperator + ?Sized,
    G: SketchSource + ?Sized,
{
    let (m, n) = (a.rows(), a.cols());
    check_width(m, l, n)?;
    let mut sketch = Matrix::zeros(m, l);
    let mut column = alloc::vec![0.0; n];
    for k in 0..l {
        g.fill_column(&mut column);
        a.apply_into(&column, sketch.column_mut(k))?;
    }
    Ok(sketch)
}

/// `X = P⁻¹·A·A*·(P*)⁻¹` for `P = Π*·R*`, one column per `A*`/`A` pair.
pub fn build_gram<A>(a: &A, r: &Matrix, perm: &Permutation) -> Result<Matrix>
where
    A: LinearOperator + ?Sized,
{
    let (m, n) = (a.rows(), a.cols());
    crate::error::check_len("triangular factor size", m, r.rows())?;
    crate::error::check_len("permutation size", m, perm.len())?;

    // P⁻ = Π*·R⁻¹
    let mut p_minus = Matrix::zeros(m, m);
    let mut unit = alloc::vec![0.0; m];
    for k in 0..m {
        unit.iter_mut().for_each(|v| *v = 0.0);
        unit[k] = 1.0;
        solve_upper_in_place(r, &mut unit)?;
        perm.apply_adjoint_into(&unit, p_minus.column_mut(k));
    }

    let mut gram = Matrix::zeros(m, m);
    let mut wide = alloc::vec![0.0; n];
    let mut short = alloc::vec![0.0; m];
    for k in 0..m {
        a.apply_adjoint_into(p_minus.column(k), &mut wide)?;
        a.apply_into(&wide, &mut short)?;
        let x = gram.column_mut(k);
        perm.apply_into(&short, x);
        solve_upper_adjoint_in_place(r, x)?;
    }
    Ok(gram)
}

/// Sketches `A` with `l` columns from `g`, factors `S*`, and inverts the
/// preconditioned Gram matrix.
///
/// A numerically rank-deficient sketch (`|R[k,k]| < m·ε·|R[0,0]|`) yields
/// [`Error::RankDeficient`]; drawing more columns from `g` and calling again
/// is the intended recovery.
pub fn build_preconditioner<A, G>(a: &A, l: usize, g: &mut G) -> Result<Preconditioner>
where
    A: LinearOperator + ?Sized,
    G: SketchSource + ?Sized,
{
    let (m, n) = (a.rows(), a.cols());
    check_width(m, l, n)?;
    let before = a.counts();

    let sketch = build_sketch(a, l, g)?;
    let factors = qr_pivoted(&sketch.transpose())?;
    let threshold = m as f64 * f64::EPSILON;
    if let Some(index) = factors.deficient_pivot(threshold) {
        let lead = factors.r()[(0, 0)].abs();
        let ratio = if lead > 0.0 {
            factors.r()[(index, index)].abs() / lead
        } else {
            0.0
        };
        return Err(Error::RankDeficient { index, ratio });
    }
    let (r, perm) = factors.into_parts();

    let gram = build_gram(a, &r, &perm)?;
    let y = invert_small(&gram)?;

    Ok(Preconditioner {
        r,
        perm,
        y,
        sketch_width: l,
        rows: m,
        cols: n,
        build_counts: a.counts() - before,
    })
}

/// [`build_preconditioner`] with a fresh seeded sketch source per attempt,
/// up to [`MAX_BUILD_ATTEMPTS`]. The first attempt uses `seed` unchanged.
pub fn build_preconditioner_with_retry<A>(a: &A, l: usize, kind: SketchKind, seed: u64) -> Result<Preconditioner>
where
    A: LinearOperator + ?Sized,
{
    for attempt in 0..MAX_BUILD_ATTEMPTS {
        let attempt_seed = if attempt == 0 {
            seed
        } else {
            derive_seed(seed, attempt as u64)
        };
        let mut g = SketchRng::new(kind, attempt_seed);
        match build_preconditioner(a, l, &mut g) {
            Err(e) if e.is_retriable() => continue,
            other => return other,
        }
    }
    Err(Error::RetriesExhausted {
        attempts: MAX_BUILD_ATTEMPTS,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linop::{densify, make_sparse_test, DenseOperator};
    use crate::rng::UniformLaggedFibonacci;
    use crate::{dense, vector};

    #[test]
    fn default_widths() {
        assert_eq!(default_sketch_width(40), 44);
        assert_eq!(default_sketch_width(4000), 4004);
        assert_eq!(sketch_width_for(1, 1), 1);
        assert_eq!(sketch_width_for(10, 12), 12);
    }

    #[test]
    fn zero_operator_gives_zero_sketch_and_fails_build() {
        let a = DenseOperator::new(Matrix::zeros(2, 5));
        let mut g = UniformLaggedFibonacci::new(1);
        let s = build_sketch(&a, 3, &mut g).unwrap();
        assert_eq!(s, Matrix::zeros(2, 3));
        let err = build_preconditioner(&a, 3, &mut g).unwrap_err();
        assert!(err.is_retriable());
        assert_eq!(
            build_preconditioner_with_retry(&a, 3, SketchKind::Gaussian, 1).unwrap_err(),
            Error::RetriesExhausted { attempts: 3 }
        );
    }

    #[test]
    fn sketch_of_selector_replays_stream() {
        // A = [I_3 | 0], so S holds the first three entries of each G column
        let a = DenseOperator::new(Matrix::from_fn(3, 6, |i, j| if i == j { 1.0 } else { 0.0 }));
        let mut g = UniformLaggedFibonacci::new(21);
        let s = build_sketch(&a, 3, &mut g).unwrap();
        let mut replay = UniformLaggedFibonacci::new(21);
        for k in 0..3 {
            let col = replay.column(6);
            assert_eq!(s.column(k), &col[..3]);
        }
        assert_eq!(a.counts(), ApplyCounts::new(3, 0));
    }

    #[test]
    fn width_validation() {
        let a = make_sparse_test(4, 8, 10.0, 1).unwrap();
        let mut g = UniformLaggedFibonacci::new(1);
        assert!(matches!(build_sketch(&a, 3, &mut g), Err(Error::Config(_))));
        assert!(matches!(build_preconditioner(&a, 9, &mut g), Err(Error::Config(_))));
        assert_eq!(a.counts(), ApplyCounts::default());
    }

    #[test]
    fn scalar_chain() {
        let c = 3.0;
        let a = DenseOperator::new(Matrix::diagonal(&[c]));
        let mut g = UniformLaggedFibonacci::new(5);
        let pre = build_preconditioner(&a, 1, &mut g).unwrap();
        let r = pre.r()[(0, 0)];
        // X = c²/r², Y = r²/c²
        assert!((pre.y()[(0, 0)] - r * r / (c * c)).abs() <= 1e-15 * pre.y()[(0, 0)]);
        assert_eq!(pre.build_counts(), ApplyCounts::new(2, 1));
    }

    #[test]
    fn gram_scalar() {
        let a = DenseOperator::new(Matrix::diagonal(&[2.0]));
        let x = build_gram(&a, &Matrix::diagonal(&[4.0]), &Permutation::identity(1)).unwrap();
        assert!((x[(0, 0)] - 0.25).abs() < 1e-16);
    }

    #[test]
    fn gram_matches_dense_formula() {
        let a = make_sparse_test(4, 8, 50.0, 9).unwrap();
        let mut g = UniformLaggedFibonacci::new(3);
        let s = build_sketch(&a, 4, &mut g).unwrap();
        let (r, perm) = qr_pivoted(&s.transpose()).unwrap().into_parts();
        let x = build_gram(&a, &r, &perm).unwrap();

        // oracle: B = R⁻*·Π·A (dense), X = B·B*
        let dense = densify(&a).unwrap();
        let mut b = Matrix::zeros(4, 8);
        for j in 0..8 {
            let mut col = perm.apply(dense.column(j)).unwrap();
            dense::solve_upper_adjoint_in_place(&r, &mut col).unwrap();
            b.column_mut(j).copy_from_slice(&col);
        }
        let oracle = b.matmul(&b.transpose()).unwrap();
        let scale = oracle.max_abs();
        assert!(x.sub(&oracle).unwrap().max_abs() <= 1e-10 * scale);
    }

    #[test]
    fn apply_inverse_matches_definition() {
        let a = make_sparse_test(6, 12, 100.0, 2).unwrap();
        let mut g = UniformLaggedFibonacci::new(8);
        let pre = build_preconditioner(&a, 8, &mut g).unwrap();
        // P = Π*·R*, so P·(P⁻¹·v) = v
        let v = [1.0, -2.0, 0.5, 3.0, 0.0, 1.5];
        let mut w = v.to_vec();
        pre.apply_inverse(&mut w).unwrap();
        let rt_w = pre.r().matvec_transpose(&w).unwrap();
        let back = pre.perm().apply_adjoint(&rt_w).unwrap();
        assert!(vector::norm2(&vector::sub(&back, &v)) <= 1e-12 * vector::norm2(&v));
    }
}
