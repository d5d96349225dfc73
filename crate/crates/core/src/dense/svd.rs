use alloc::vec::Vec;

use super::qr::qr_pivoted;
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::vector;

/// Largest `rows * cols` accepted by [`svd_dense`].
pub const ORACLE_CAP: usize = 1_000_000;

const MAX_SWEEPS: usize = 80;

/// Singular values in nonincreasing order and the ratio of the extreme ones.
#[derive(Clone, Debug, PartialEq)]
pub struct SingularValues {
    pub values: Vec<f64>,
    pub condition: f64,
}

/// `M = U·diag(σ)·V*` with `r = min(p, q)` columns in `U` and `V`.
#[derive(Clone, Debug)]
pub struct ThinSvd {
    pub u: Matrix,
    pub sigma: Vec<f64>,
    pub v: Matrix,
}

/// One-sided Jacobi on the columns of a `p × q` matrix with `p ≥ q`.
/// Returns the rotated columns (orthogonal on exit) and the accumulated
/// right rotation.
fn hestenes(mut work: Matrix, track: bool) -> (Matrix, Option<Matrix>) {
    let q = work.cols();
    let mut rot = if track { Some(Matrix::identity(q)) } else { None };
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..q {
            for j in i + 1..q {
                let alpha = vector::dot(work.column(i), work.column(i));
                let beta = vector::dot(work.column(j), work.column(j));
                let gamma = vector::dot(work.column(i), work.column(j));
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * libm::sqrt(alpha * beta) {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + libm::hypot(1.0, zeta));
                let c = 1.0 / libm::sqrt(1.0 + t * t);
                let s = c * t;
                rotate(&mut work, i, j, c, s);
                if let Some(v) = rot.as_mut() {
                    rotate(v, i, j, c, s);
                }
            }
        }
        if !rotated {
            break;
        }
    }
    (work, rot)
}

fn rotate(m: &mut Matrix, i: usize, j: usize, c: f64, s: f64) {
    let (head, mut rest) = m.split_at_column(i);
    let ci: Vec<f64> = head.to_vec();
    let cj = &mut rest[j - i - 1];
    let mut new_i = alloc::vec![0.0; ci.len()];
    for k in 0..ci.len() {
        new_i[k] = c * ci[k] - s * cj[k];
        cj[k] = s * ci[k] + c * cj[k];
    }
    m.column_mut(i).copy_from_slice(&new_i);
}

fn sorted_order(norms: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..norms.len()).collect();
    order.sort_by(|&a, &b| norms[b].total_cmp(&norms[a]));
    order
}

/// Full thin SVD by one-sided Jacobi. Meant for oracle-sized inputs.
pub fn svd_thin(m: &Matrix) -> ThinSvd {
    let (p, q) = m.shape();
    if p < q {
        let t = svd_thin(&m.transpose());
        return ThinSvd {
            u: t.v,
            sigma: t.sigma,
            v: t.u,
        };
    }
    let (work, rot) = hestenes(m.clone(), true);
    let rot = rot.expect("rotation tracked");
    let norms: Vec<f64> = (0..q).map(|j| vector::norm2(work.column(j))).collect();
    let order = sorted_order(&norms);
    let mut u = Matrix::zeros(p, q);
    let mut v = Matrix::zeros(q, q);
    let mut sigma = Vec::with_capacity(q);
    for (dst, &src) in order.iter().enumerate() {
        let s = norms[src];
        sigma.push(s);
        if s > 0.0 {
            for (o, w) in u.column_mut(dst).iter_mut().zip(work.column(src)) {
                *o = w / s;
            }
        }
        v.column_mut(dst).copy_from_slice(rot.column(src));
    }
    ThinSvd { u, sigma, v }
}

/// Singular values and condition number (`σ_max/σ_min`, infinite when
/// `σ_min = 0`) of a dense matrix of at most [`ORACLE_CAP`] entries.
pub fn svd_dense(m: &Matrix) -> Result<SingularValues> {
    svd_dense_with_cap(m, ORACLE_CAP)
}

pub fn svd_dense_with_cap(m: &Matrix, cap: usize) -> Result<SingularValues> {
    let entries = m.rows().saturating_mul(m.cols());
    if entries > cap {
        return Err(Error::SizeCap { entries, cap });
    }
    let tall = if m.rows() >= m.cols() { m.clone() } else { m.transpose() };
    if tall.cols() == 0 {
        return Ok(SingularValues {
            values: Vec::new(),
            condition: f64::NAN,
        });
    }
    // Householder QR first when the matrix is much taller than wide; the
    // triangular factor has the same singular values.
    let square = if tall.rows() > 2 * tall.cols() {
        qr_pivoted(&tall)?.r().clone()
    } else {
        tall
    };
    let (work, _) = hestenes(square, false);
    let mut values: Vec<f64> = (0..work.cols()).map(|j| vector::norm2(work.column(j))).collect();
    values.sort_by(|a, b| b.total_cmp(a));
    let smallest = *values.last().expect("nonempty");
    let condition = if smallest > 0.0 {
        values[0] / smallest
    } else {
        f64::INFINITY
    };
    Ok(SingularValues { values, condition })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{GaussianStream, SketchSource};

    fn random(rows: usize, cols: usize, seed: u64) -> Matrix {
        let mut g = GaussianStream::new(seed);
        Matrix::from_column_major(rows, cols, g.column(rows * cols)).unwrap()
    }

    #[test]
    fn diagonal_values() {
        let s = svd_dense(&Matrix::diagonal(&[1.0, 3.0])).unwrap();
        assert_eq!(s.values.len(), 2);
        assert!((s.values[0] - 3.0).abs() < 1e-15 && (s.values[1] - 1.0).abs() < 1e-15);
        assert!((s.condition - 3.0).abs() < 1e-15);
    }

    #[test]
    fn orthonormal_columns_have_unit_values() {
        let q = qr_pivoted(&random(9, 4, 3)).unwrap().q();
        for v in svd_dense(&q).unwrap().values {
            assert!((v - 1.0).abs() <= 1e-13);
        }
    }

    #[test]
    fn thin_reconstructs_both_orientations() {
        for &(p, q) in &[(7usize, 4usize), (3, 8)] {
            let m = random(p, q, 10 + p as u64);
            let t = svd_thin(&m);
            let r = p.min(q);
            let mut us = t.u.clone();
            for k in 0..r {
                us.column_mut(k).iter_mut().for_each(|v| *v *= t.sigma[k]);
            }
            let back = us.matmul(&t.v.transpose()).unwrap();
            assert!(back.sub(&m).unwrap().max_abs() <= 1e-13);
            for k in 1..r {
                assert!(t.sigma[k] <= t.sigma[k - 1]);
            }
            let vtv = t.v.transpose().matmul(&t.v).unwrap();
            assert!(vtv.sub(&Matrix::identity(r)).unwrap().max_abs() <= 1e-13);
        }
    }

    #[test]
    fn tall_path_matches_direct_path() {
        let m = random(40, 5, 2);
        let via_qr = svd_dense(&m).unwrap();
        let direct = svd_thin(&m);
        for (a, b) in via_qr.values.iter().zip(&direct.sigma) {
            assert!((a - b).abs() <= 1e-12 * direct.sigma[0]);
        }
    }

    #[test]
    fn rank_deficient_is_infinitely_conditioned() {
        let s = svd_dense(&Matrix::from_row_major(2, 2, &[1.0, 1.0, 1.0, 1.0]).unwrap()).unwrap();
        assert!(s.condition > 1e15);
    }

    #[test]
    fn cap_enforced() {
        assert_eq!(
            svd_dense_with_cap(&Matrix::zeros(3, 3), 8),
            Err(Error::SizeCap { entries: 9, cap: 8 })
        );
    }
}
