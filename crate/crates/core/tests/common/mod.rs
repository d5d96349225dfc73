#![allow(dead_code)]

use nalgebra::DMatrix;
use randproj_core::rng::{GaussianStream, SketchSource};
use randproj_core::{vector, Matrix};

pub fn to_na(m: &Matrix) -> DMatrix<f64> {
    DMatrix::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

pub fn gaussian_matrix(rows: usize, cols: usize, seed: u64) -> Matrix {
    let mut g = GaussianStream::new(seed);
    Matrix::from_column_major(rows, cols, g.column(rows * cols)).unwrap()
}

pub fn unit_vector(len: usize, g: &mut GaussianStream) -> Vec<f64> {
    let mut v = g.column(len);
    let norm = vector::norm2(&v);
    v.iter_mut().for_each(|x| *x /= norm);
    v
}

/// Singular values from nalgebra's SVD, descending.
pub fn na_singular_values(m: &Matrix) -> Vec<f64> {
    let mut s: Vec<f64> = to_na(m).svd(false, false).singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    s
}

pub fn na_condition(m: &Matrix) -> f64 {
    let s = na_singular_values(m);
    s[0] / s[s.len() - 1]
}

pub fn rel_err(a: &[f64], b: &[f64]) -> f64 {
    vector::norm2(&vector::sub(a, b)) / vector::norm2(b)
}
