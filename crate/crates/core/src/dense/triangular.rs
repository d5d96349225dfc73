use alloc::vec::Vec;

use crate::error::{check_len, Error, Result};
use crate::matrix::Matrix;

fn check_square(r: &Matrix, rhs: usize) -> Result<()> {
    check_len("triangular factor columns", r.rows(), r.cols())?;
    check_len("right-hand side", r.rows(), rhs)
}

fn pivot(r: &Matrix, i: usize) -> Result<f64> {
    let d = r[(i, i)];
    if d == 0.0 || !d.is_finite() {
        Err(Error::SingularFactor { index: i })
    } else {
        Ok(d)
    }
}

/// Back substitution for `R·g = y`, overwriting `y` with `g`.
pub fn solve_upper_in_place(r: &Matrix, y: &mut [f64]) -> Result<()> {
    check_square(r, y.len())?;
    let m = y.len();
    for i in 0..m {
        pivot(r, i)?;
    }
    // column-oriented: walk columns right to left
    for j in (0..m).rev() {
        y[j] /= r[(j, j)];
        let gj = y[j];
        if gj != 0.0 {
            let col = r.column(j);
            for i in 0..j {
                y[i] -= col[i] * gj;
            }
        }
    }
    Ok(())
}

/// Forward substitution for `R*·e = d`, overwriting `d` with `e`.
pub fn solve_upper_adjoint_in_place(r: &Matrix, d: &mut [f64]) -> Result<()> {
    check_square(r, d.len())?;
    let m = d.len();
    for i in 0..m {
        pivot(r, i)?;
    }
    // row i of R* is column i of R
    for i in 0..m {
        let col = r.column(i);
        let partial = crate::vector::dot(&col[..i], &d[..i]);
        d[i] = (d[i] - partial) / col[i];
    }
    Ok(())
}

pub fn solve_upper(r: &Matrix, y: &[f64]) -> Result<Vec<f64>> {
    let mut g = y.to_vec();
    solve_upper_in_place(r, &mut g)?;
    Ok(g)
}

pub fn solve_upper_adjoint(r: &Matrix, d: &[f64]) -> Result<Vec<f64>> {
    let mut e = d.to_vec();
    solve_upper_adjoint_in_place(r, &mut e)?;
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{GaussianStream, SketchSource};
    use crate::vector;
    use alloc::vec;

    fn well_conditioned_upper(m: usize, seed: u64) -> Matrix {
        let mut g = GaussianStream::new(seed);
        Matrix::from_fn(m, m, |i, j| match i.cmp(&j) {
            core::cmp::Ordering::Less => 0.3 * g.next_gaussian(),
            core::cmp::Ordering::Equal => 2.0 + g.next_gaussian().abs(),
            core::cmp::Ordering::Greater => 0.0,
        })
    }

    #[test]
    fn identity_and_scalar() {
        assert_eq!(
            solve_upper(&Matrix::identity(3), &[1.0, 2.0, 3.0]).unwrap(),
            vec![1.0, 2.0, 3.0]
        );
        assert_eq!(
            solve_upper_adjoint(&Matrix::identity(3), &[1.0, 2.0, 3.0]).unwrap(),
            vec![1.0, 2.0, 3.0]
        );
        assert_eq!(solve_upper(&Matrix::diagonal(&[2.0]), &[6.0]).unwrap(), vec![3.0]);
    }

    #[test]
    fn two_by_two_adjoint_by_hand() {
        let r = Matrix::from_row_major(2, 2, &[1.0, 1.0, 0.0, 1.0]).unwrap();
        assert_eq!(solve_upper_adjoint(&r, &[1.0, 1.0]).unwrap(), vec![1.0, 0.0]);
    }

    #[test]
    fn residuals_are_small() {
        let r = well_conditioned_upper(12, 4);
        let mut g = GaussianStream::new(5);
        let y = g.column(12);
        let x = solve_upper(&r, &y).unwrap();
        let res = vector::sub(&r.matvec(&x).unwrap(), &y);
        assert!(vector::norm2(&res) / vector::norm2(&y) <= 1e-13);
        let e = solve_upper_adjoint(&r, &y).unwrap();
        let res = vector::sub(&r.matvec_transpose(&e).unwrap(), &y);
        assert!(vector::norm2(&res) / vector::norm2(&y) <= 1e-13);
    }

    #[test]
    fn zero_diagonal_names_index() {
        let r = Matrix::from_row_major(3, 3, &[1.0, 2.0, 3.0, 0.0, 4.0, 5.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(solve_upper(&r, &[1.0; 3]), Err(Error::SingularFactor { index: 2 }));
        assert_eq!(
            solve_upper_adjoint(&r, &[1.0; 3]),
            Err(Error::SingularFactor { index: 2 })
        );
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(
            solve_upper(&Matrix::identity(3), &[1.0; 2]),
            Err(Error::Dimension { .. })
        ));
    }
}
