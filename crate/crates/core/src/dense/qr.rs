use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::perm::Permutation;
use crate::vector;

/// Relative margin within which two column norms count as tied; ties go to
/// the lower column index.
const PIVOT_TIE: f64 = 1e-15;

/// `M = Q·R·Π` for an `l × m` input with `l ≥ m`.
///
/// `R` has a nonnegative diagonal that is nonincreasing in magnitude. `Q` is
/// kept as Householder reflectors and only formed on request by [`q`](Self::q).
#[derive(Clone, Debug)]
pub struct PivotedQr {
    reflectors: Matrix,
    tau: Vec<f64>,
    r: Matrix,
    perm: Permutation,
}

impl PivotedQr {
    pub fn r(&self) -> &Matrix {
        &self.r
    }

    pub fn perm(&self) -> &Permutation {
        &self.perm
    }

    pub fn into_parts(self) -> (Matrix, Permutation) {
        (self.r, self.perm)
    }

    /// The `l × m` factor with orthonormal columns.
    pub fn q(&self) -> Matrix {
        let (l, m) = self.reflectors.shape();
        let mut q = Matrix::zeros(l, m);
        for k in 0..m {
            q[(k, k)] = 1.0;
        }
        for k in (0..m).rev() {
            let tau = self.tau[k];
            if tau == 0.0 {
                continue;
            }
            let v = &self.reflectors.column(k)[k..];
            for j in k..m {
                let col = &mut q.column_mut(j)[k..];
                let w = reflect_dot(v, col);
                axpy_reflector(-tau * w, v, col);
            }
        }
        q
    }

    /// First pivot `k` with `|R[k,k]| < rel_tol·|R[0,0]|`, if any.
    pub fn deficient_pivot(&self, rel_tol: f64) -> Option<usize> {
        let m = self.r.cols();
        if m == 0 {
            return None;
        }
        let lead = self.r[(0, 0)].abs();
        (0..m).find(|&k| lead == 0.0 || self.r[(k, k)].abs().is_nan() || self.r[(k, k)].abs() < rel_tol * lead)
    }
}

// The reflector is v = (1, v[1..]) with the leading 1 implicit.
fn reflect_dot(v: &[f64], x: &[f64]) -> f64 {
    x[0] + vector::dot(&v[1..], &x[1..])
}

fn axpy_reflector(alpha: f64, v: &[f64], x: &mut [f64]) {
    x[0] += alpha;
    vector::axpy(alpha, &v[1..], &mut x[1..]);
}

/// Householder QR with greedy column pivoting on the largest remaining
/// column norm.
pub fn qr_pivoted(input: &Matrix) -> Result<PivotedQr> {
    let (l, m) = input.shape();
    if l < m {
        return Err(Error::Shape {
            rows: l,
            cols: m,
            reason: "pivoted QR needs at least as many rows as columns",
        });
    }
    let mut a = input.clone();
    let mut perm = Permutation::identity(m);
    let mut tau = alloc::vec![0.0; m];

    for k in 0..m {
        let mut best = k;
        let mut best_norm = -1.0;
        for j in k..m {
            let tail = &a.column(j)[k..];
            let norm = vector::dot(tail, tail);
            if norm > best_norm * (1.0 + 2.0 * PIVOT_TIE) || best_norm < 0.0 {
                best = j;
                best_norm = norm;
            }
        }
        a.swap_columns(k, best);
        perm.swap(k, best);

        let col = &mut a.column_mut(k)[k..];
        let alpha = col[0];
        let sigma = vector::dot(&col[1..], &col[1..]);
        if sigma == 0.0 {
            // already a multiple of e1; reflect only to fix the sign
            if alpha < 0.0 {
                tau[k] = 2.0;
                col[0] = -alpha;
            }
        } else {
            let beta = libm::sqrt(alpha * alpha + sigma);
            let v0 = if alpha <= 0.0 {
                alpha - beta
            } else {
                -sigma / (alpha + beta)
            };
            tau[k] = 2.0 * v0 * v0 / (sigma + v0 * v0);
            col[0] = beta;
            col[1..].iter_mut().for_each(|v| *v /= v0);
        }
        if tau[k] == 0.0 {
            continue;
        }

        let (head, mut rest) = a.split_at_column(k);
        let v = &head[k..];
        for target in rest.iter_mut() {
            let target = &mut target[k..];
            let w = reflect_dot(v, target);
            axpy_reflector(-tau[k] * w, v, target);
        }
    }

    let r = Matrix::from_fn(m, m, |i, j| if i <= j { a[(i, j)] } else { 0.0 });
    Ok(PivotedQr {
        reflectors: a,
        tau,
        r,
        perm,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{GaussianStream, SketchSource};

    fn random(rows: usize, cols: usize, seed: u64) -> Matrix {
        let mut g = GaussianStream::new(seed);
        Matrix::from_column_major(rows, cols, g.column(rows * cols)).unwrap()
    }

    fn reconstruct(f: &PivotedQr) -> Matrix {
        let qr = f.q().matmul(f.r()).unwrap();
        let m = qr.cols();
        let mut out = Matrix::zeros(qr.rows(), m);
        for k in 0..m {
            out.column_mut(f.perm().as_slice()[k]).copy_from_slice(qr.column(k));
        }
        out
    }

    #[test]
    fn identity_factors_trivially() {
        let f = qr_pivoted(&Matrix::identity(4)).unwrap();
        assert_eq!(f.q(), Matrix::identity(4));
        assert_eq!(f.r(), &Matrix::identity(4));
        assert_eq!(f.perm(), &Permutation::identity(4));
    }

    #[test]
    fn random_reconstruction_and_orthogonality() {
        let m = random(8, 5, 1);
        let f = qr_pivoted(&m).unwrap();
        let rel = reconstruct(&f).sub(&m).unwrap().frobenius_norm() / m.frobenius_norm();
        assert!(rel <= 1e-13, "relative error {rel}");
        let q = f.q();
        let gram = q.transpose().matmul(&q).unwrap();
        assert!(gram.sub(&Matrix::identity(5)).unwrap().max_abs() <= 1e-13);
        for k in 0..5 {
            assert!(f.r()[(k, k)] >= 0.0);
            if k > 0 {
                assert!(f.r()[(k, k)] <= f.r()[(k - 1, k - 1)]);
            }
        }
    }

    #[test]
    fn duplicate_columns_are_flagged() {
        let mut m = random(6, 4, 2);
        let dup = m.column(1).to_vec();
        m.column_mut(3).copy_from_slice(&dup);
        let f = qr_pivoted(&m).unwrap();
        let r = f.r();
        assert!(r[(3, 3)].abs() <= 1e-12 * r[(0, 0)].abs());
        assert_eq!(f.deficient_pivot(4.0 * f64::EPSILON), Some(3));
        assert_eq!(
            qr_pivoted(&random(6, 4, 3))
                .unwrap()
                .deficient_pivot(4.0 * f64::EPSILON),
            None
        );
    }

    #[test]
    fn negative_axis_column_gets_positive_diagonal() {
        let m = Matrix::from_row_major(2, 2, &[-3.0, 0.0, 0.0, 1.0]).unwrap();
        let f = qr_pivoted(&m).unwrap();
        assert_eq!(f.r()[(0, 0)], 3.0);
        let rel = reconstruct(&f).sub(&m).unwrap().max_abs();
        assert!(rel < 1e-15);
    }

    #[test]
    fn wide_input_rejected() {
        assert!(matches!(qr_pivoted(&Matrix::zeros(2, 3)), Err(Error::Shape { .. })));
    }

    #[test]
    fn ties_pick_lower_index() {
        let m = Matrix::from_row_major(2, 2, &[1.0, 0.0, 0.0, 1.0]).unwrap();
        let f = qr_pivoted(&m).unwrap();
        assert_eq!(f.perm(), &Permutation::identity(2));
    }

    #[test]
    fn zero_matrix_is_deficient() {
        let f = qr_pivoted(&Matrix::zeros(3, 2)).unwrap();
        assert_eq!(f.deficient_pivot(1e-14), Some(0));
    }
}
