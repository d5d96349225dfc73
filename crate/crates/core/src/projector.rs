//! Row-space and null-space projections, least squares, and the
//! normal-equations baseline.

use alloc::vec::Vec;

use crate::dense::{qr_pivoted, solve_upper_adjoint_in_place, solve_upper_in_place};
use crate::error::{check_len, Result};
use crate::linop::LinearOperator;
use crate::matrix::Matrix;
use crate::perm::Permutation;
use crate::precond::Preconditioner;
use crate::vector;

/// Output of one projection of `b` (length n).
#[derive(Clone, Debug, PartialEq)]
pub struct ProjectionResult {
    /// `b̃ = A*·h`, the projection onto the row space.
    pub row_projection: Vec<f64>,
    /// `b − b̃`, the projection onto the null space.
    pub null_projection: Vec<f64>,
    /// `h` minimizing `‖A*·h − b‖`.
    pub lstsq_solution: Vec<f64>,
}

impl ProjectionResult {
    fn from_solution<A: LinearOperator + ?Sized>(a: &A, b: &[f64], h: Vec<f64>) -> Result<Self> {
        let row_projection = a.apply_adjoint(&h)?;
        let null_projection = vector::sub(b, &row_projection);
        Ok(Self {
            row_projection,
            null_projection,
            lstsq_solution: h,
        })
    }
}

// c = A·b, d = Π·c, R*·e = d, f = Y·e, R·g = f, h = Π*·g
fn least_squares_steps<A>(pre: &Preconditioner, a: &A, b: &[f64]) -> Result<Vec<f64>>
where
    A: LinearOperator + ?Sized,
{
    pre.check_operator(a)?;
    check_len("right-hand side", a.cols(), b.len())?;
    let c = a.apply(b)?;
    let mut d = pre.perm().apply(&c)?;
    solve_upper_adjoint_in_place(pre.r(), &mut d)?;
    let mut f = pre.y().matvec(&d)?;
    solve_upper_in_place(pre.r(), &mut f)?;
    pre.perm().apply_adjoint(&f)
}

/// Projects `b` onto the row space and null space of `A`: one apply of `A`
/// and one of `A*`.
pub fn project<A>(pre: &Preconditioner, a: &A, b: &[f64]) -> Result<ProjectionResult>
where
    A: LinearOperator + ?Sized,
{
    let h = least_squares_steps(pre, a, b)?;
    ProjectionResult::from_solution(a, b, h)
}

/// `h` minimizing `‖A*·h − b‖`; one apply of `A`.
pub fn solve_lstsq<A>(pre: &Preconditioner, a: &A, b: &[f64]) -> Result<Vec<f64>>
where
    A: LinearOperator + ?Sized,
{
    least_squares_steps(pre, a, b)
}

/// Iterative refinement of a least-squares solution `h`.
///
/// Each pass forms `r = b − A*·h` and adds the correction obtained by
/// running `r` through the same `(R, Π, Y)` chain, costing one apply of `A*`
/// and one of `A`. Zero iterations return `h` unchanged.
pub fn refine_lstsq<A>(pre: &Preconditioner, a: &A, b: &[f64], h: &[f64], iterations: usize) -> Result<Vec<f64>>
where
    A: LinearOperator + ?Sized,
{
    pre.check_operator(a)?;
    check_len("right-hand side", a.cols(), b.len())?;
    check_len("least-squares solution", a.rows(), h.len())?;
    let mut current = h.to_vec();
    for _ in 0..iterations {
        let fitted = a.apply_adjoint(&current)?;
        let residual = vector::sub(b, &fitted);
        let correction = least_squares_steps(pre, a, &residual)?;
        vector::axpy(1.0, &correction, &mut current);
    }
    Ok(current)
}

/// Null-space projection of an already projected vector `z`.
pub fn reproject<A>(pre: &Preconditioner, a: &A, z: &[f64]) -> Result<Vec<f64>>
where
    A: LinearOperator + ?Sized,
{
    Ok(project(pre, a, z)?.null_projection)
}

/// Normal-equations baseline: `b − A*·(A·A*)⁻¹·A·b` with `A·A*` factored
/// once by pivoted QR.
#[derive(Clone, Debug)]
pub struct ClassicalProjector {
    q: Matrix,
    r: Matrix,
    perm: Permutation,
    rows: usize,
    cols: usize,
}

impl ClassicalProjector {
    /// Forms `A·A*` column by column (`m` applies of `A*` and `m` of `A`)
    /// and factors it.
    pub fn new<A: LinearOperator + ?Sized>(a: &A) -> Result<Self> {
        let (m, n) = (a.rows(), a.cols());
        let mut gram = Matrix::zeros(m, m);
        let mut unit = alloc::vec![0.0; m];
        let mut wide = alloc::vec![0.0; n];
        for k in 0..m {
            unit[k] = 1.0;
            a.apply_adjoint_into(&unit, &mut wide)?;
            a.apply_into(&wide, gram.column_mut(k))?;
            unit[k] = 0.0;
        }
        let factors = qr_pivoted(&gram)?;
        let q = factors.q();
        let (r, perm) = factors.into_parts();
        Ok(Self {
            q,
            r,
            perm,
            rows: m,
            cols: n,
        })
    }

    /// Solves `(A·A*)·w = A·b` and returns `A*·w` and `b − A*·w`.
    pub fn project<A: LinearOperator + ?Sized>(&self, a: &A, b: &[f64]) -> Result<ProjectionResult> {
        check_len("operator rows", self.rows, a.rows())?;
        check_len("operator cols", self.cols, a.cols())?;
        check_len("right-hand side", self.cols, b.len())?;
        let c = a.apply(b)?;
        let mut u = self.q.matvec_transpose(&c)?;
        solve_upper_in_place(&self.r, &mut u)?;
        let w = self.perm.apply_adjoint(&u)?;
        ProjectionResult::from_solution(a, b, w)
    }
}

/// One-shot convenience wrapper over [`ClassicalProjector`].
pub fn classical_project<A: LinearOperator + ?Sized>(
    classical: &ClassicalProjector,
    a: &A,
    b: &[f64],
) -> Result<ProjectionResult> {
    classical.project(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linop::{make_sparse_test, ApplyCounts, DenseOperator};
    use crate::precond::build_preconditioner;
    use crate::rng::{GaussianStream, SketchSource, UniformLaggedFibonacci};
    use crate::Error;

    #[test]
    fn zero_vector_projects_to_zero() {
        let a = make_sparse_test(4, 12, 100.0, 1).unwrap();
        let pre = build_preconditioner(&a, 6, &mut UniformLaggedFibonacci::new(2)).unwrap();
        let out = project(&pre, &a, &[0.0; 12]).unwrap();
        assert!(out.row_projection.iter().all(|&v| v == 0.0));
        assert!(out.null_projection.iter().all(|&v| v == 0.0));
        assert!(out.lstsq_solution.iter().all(|&v| v == 0.0));
        assert!(reproject(&pre, &a, &[0.0; 12]).unwrap().iter().all(|&v| v == 0.0));
        let classical = ClassicalProjector::new(&a).unwrap();
        assert!(classical
            .project(&a, &[0.0; 12])
            .unwrap()
            .null_projection
            .iter()
            .all(|&v| v == 0.0));
    }

    #[test]
    fn complementarity_is_exact() {
        let a = make_sparse_test(4, 12, 100.0, 1).unwrap();
        let pre = build_preconditioner(&a, 6, &mut UniformLaggedFibonacci::new(2)).unwrap();
        let b = GaussianStream::new(3).column(12);
        let out = project(&pre, &a, &b).unwrap();
        for ((&bi, &ri), &zi) in b.iter().zip(&out.row_projection).zip(&out.null_projection) {
            assert_eq!(zi, bi - ri);
            assert!((ri + zi - bi).abs() <= f64::EPSILON * bi.abs().max(ri.abs()));
        }
        assert_eq!(out.row_projection, a.apply_adjoint(&out.lstsq_solution).unwrap());
    }

    #[test]
    fn costs_one_apply_each() {
        let a = make_sparse_test(8, 32, 1e4, 4).unwrap();
        let pre = build_preconditioner(&a, 12, &mut UniformLaggedFibonacci::new(2)).unwrap();
        let before = a.counts();
        project(&pre, &a, &[1.0; 32]).unwrap();
        assert_eq!(a.counts() - before, ApplyCounts::new(1, 1));
        let before = a.counts();
        let h = solve_lstsq(&pre, &a, &[1.0; 32]).unwrap();
        assert_eq!(a.counts() - before, ApplyCounts::new(1, 0));
        let before = a.counts();
        refine_lstsq(&pre, &a, &[1.0; 32], &h, 2).unwrap();
        assert_eq!(a.counts() - before, ApplyCounts::new(2, 2));
    }

    #[test]
    fn zero_refinement_is_identity() {
        let a = make_sparse_test(4, 8, 10.0, 4).unwrap();
        let pre = build_preconditioner(&a, 8, &mut UniformLaggedFibonacci::new(2)).unwrap();
        let h = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(refine_lstsq(&pre, &a, &[0.5; 8], &h, 0).unwrap(), h.to_vec());
    }

    #[test]
    fn mismatched_operator_rejected() {
        let a = make_sparse_test(4, 8, 10.0, 4).unwrap();
        let other = make_sparse_test(4, 12, 10.0, 4).unwrap();
        let pre = build_preconditioner(&a, 6, &mut UniformLaggedFibonacci::new(2)).unwrap();
        assert!(matches!(
            project(&pre, &other, &[0.0; 12]),
            Err(Error::Dimension { .. })
        ));
        assert!(matches!(project(&pre, &a, &[0.0; 7]), Err(Error::Dimension { .. })));
    }

    #[test]
    fn classical_setup_counts() {
        let a = make_sparse_test(6, 12, 10.0, 4).unwrap();
        ClassicalProjector::new(&a).unwrap();
        assert_eq!(a.counts(), ApplyCounts::new(6, 6));
    }

    #[test]
    fn classical_singular_gram_fails() {
        let a = DenseOperator::new(Matrix::from_row_major(2, 3, &[1.0, 0.0, 2.0, 0.0, 0.0, 0.0]).unwrap());
        let classical = ClassicalProjector::new(&a);
        let err = classical.and_then(|c| c.project(&a, &[1.0, 1.0, 1.0]));
        assert!(err.is_err());
    }
}
