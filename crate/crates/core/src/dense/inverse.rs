use crate::error::{check_len, Error, Result};
use crate::matrix::Matrix;

/// Relative asymmetry below which the input is treated as symmetric.
const SYMMETRY_TOL: f64 = 1e-10;

/// Inverse of a small square matrix.
///
/// Symmetric inputs go through Cholesky (falling back to partially pivoted
/// LU when a pivot is not positive) and the result is symmetrized as
/// `(Y + Y*)/2`. Anything else goes straight to LU.
pub fn invert_small(x: &Matrix) -> Result<Matrix> {
    check_len("square matrix columns", x.rows(), x.cols())?;
    let scale = x.max_abs();
    let symmetric = x.asymmetry() <= SYMMETRY_TOL * scale;
    if !symmetric {
        return lu_inverse(x);
    }
    let mut y = match cholesky_inverse(x) {
        Some(y) => y,
        None => lu_inverse(x)?,
    };
    let m = y.rows();
    for j in 0..m {
        for i in 0..j {
            let avg = 0.5 * (y[(i, j)] + y[(j, i)]);
            y[(i, j)] = avg;
            y[(j, i)] = avg;
        }
    }
    Ok(y)
}

/// `X = L·L*` from the lower triangle, then `Y = L⁻*·L⁻¹`. `None` when a
/// pivot is not positive.
fn cholesky_inverse(x: &Matrix) -> Option<Matrix> {
    let m = x.rows();
    let mut l = Matrix::zeros(m, m);
    for j in 0..m {
        let mut diag = x[(j, j)];
        for k in 0..j {
            diag -= l[(j, k)] * l[(j, k)];
        }
        if diag.is_nan() || diag <= 0.0 {
            return None;
        }
        let ljj = libm::sqrt(diag);
        l[(j, j)] = ljj;
        for i in j + 1..m {
            let mut v = x[(i, j)];
            for k in 0..j {
                v -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = v / ljj;
        }
    }
    // L⁻¹ column by column (lower triangular), then Y = L⁻*·L⁻¹
    let mut linv = Matrix::zeros(m, m);
    for c in 0..m {
        let col = linv.column_mut(c);
        col[c] = 1.0 / l[(c, c)];
        for i in c + 1..m {
            let mut v = 0.0;
            for k in c..i {
                v -= l[(i, k)] * col[k];
            }
            col[i] = v / l[(i, i)];
        }
    }
    let mut y = Matrix::zeros(m, m);
    for j in 0..m {
        for i in 0..=j {
            // (L⁻*·L⁻¹)[i,j] = Σ_k L⁻¹[k,i]·L⁻¹[k,j], k ≥ max(i,j)
            let mut v = 0.0;
            for k in j..m {
                v += linv[(k, i)] * linv[(k, j)];
            }
            y[(i, j)] = v;
            y[(j, i)] = v;
        }
    }
    Some(y)
}

fn lu_inverse(x: &Matrix) -> Result<Matrix> {
    let m = x.rows();
    let mut lu = x.clone();
    let mut rows: alloc::vec::Vec<usize> = (0..m).collect();
    for k in 0..m {
        let p = (k..m)
            .max_by(|&a, &b| lu[(a, k)].abs().total_cmp(&lu[(b, k)].abs()))
            .expect("nonempty pivot range");
        if lu[(p, k)] == 0.0 || !lu[(p, k)].is_finite() {
            return Err(Error::Factorization("matrix is singular to working precision"));
        }
        if p != k {
            rows.swap(p, k);
            for j in 0..m {
                let t = lu[(p, j)];
                lu[(p, j)] = lu[(k, j)];
                lu[(k, j)] = t;
            }
        }
        let pivot = lu[(k, k)];
        for i in k + 1..m {
            lu[(i, k)] /= pivot;
            let factor = lu[(i, k)];
            if factor != 0.0 {
                for j in k + 1..m {
                    lu[(i, j)] -= factor * lu[(k, j)];
                }
            }
        }
    }
    let mut inv = Matrix::zeros(m, m);
    for c in 0..m {
        let col = inv.column_mut(c);
        for (i, &orig) in rows.iter().enumerate() {
            col[i] = if orig == c { 1.0 } else { 0.0 };
        }
        for i in 0..m {
            for k in 0..i {
                col[i] -= lu[(i, k)] * col[k];
            }
        }
        for i in (0..m).rev() {
            for k in i + 1..m {
                col[i] -= lu[(i, k)] * col[k];
            }
            col[i] /= lu[(i, i)];
        }
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{GaussianStream, SketchSource};

    fn residual(x: &Matrix, y: &Matrix) -> f64 {
        x.matmul(y).unwrap().sub(&Matrix::identity(x.rows())).unwrap().max_abs()
    }

    #[test]
    fn identity_and_diagonal() {
        assert_eq!(invert_small(&Matrix::identity(3)).unwrap(), Matrix::identity(3));
        let y = invert_small(&Matrix::diagonal(&[2.0, 4.0])).unwrap();
        assert!(y.sub(&Matrix::diagonal(&[0.5, 0.25])).unwrap().max_abs() <= 1e-15);
    }

    #[test]
    fn random_spd() {
        let mut g = GaussianStream::new(8);
        let m = Matrix::from_column_major(6, 6, g.column(36)).unwrap();
        let mut x = m.matmul(&m.transpose()).unwrap();
        for i in 0..6 {
            x[(i, i)] += 1.0;
        }
        let y = invert_small(&x).unwrap();
        assert!(residual(&x, &y) <= 1e-12);
        assert_eq!(y.asymmetry(), 0.0);
    }

    #[test]
    fn indefinite_symmetric_uses_lu() {
        let x = Matrix::from_row_major(2, 2, &[0.0, 1.0, 1.0, 0.0]).unwrap();
        let y = invert_small(&x).unwrap();
        assert!(residual(&x, &y) < 1e-15);
    }

    #[test]
    fn general_matrix() {
        let mut g = GaussianStream::new(9);
        let x = Matrix::from_column_major(5, 5, g.column(25)).unwrap();
        let y = invert_small(&x).unwrap();
        assert!(residual(&x, &y) <= 1e-11);
    }

    #[test]
    fn singular_is_an_error() {
        let x = Matrix::from_row_major(2, 2, &[1.0, 2.0, 2.0, 4.0]).unwrap();
        assert!(matches!(invert_small(&x), Err(Error::Factorization(_))));
        assert!(matches!(
            invert_small(&Matrix::zeros(3, 3)),
            Err(Error::Factorization(_))
        ));
    }
}
