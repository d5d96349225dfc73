use alloc::format;
use alloc::vec::Vec;

use super::{ApplyCounters, LinearOperator};
use crate::error::{Error, Result};

/// General sparse operator in compressed-row form, built from `(row, col,
/// value)` triplets with 0-based indices. Duplicate entries are summed.
#[derive(Debug)]
pub struct CsrOperator {
    rows: usize,
    cols: usize,
    row_start: Vec<usize>,
    col_index: Vec<usize>,
    values: Vec<f64>,
    counters: ApplyCounters,
}

impl CsrOperator {
    pub fn from_triplets(rows: usize, cols: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Config(format!("operator must be non-empty, got {rows}x{cols}")));
        }
        let mut sorted: Vec<(usize, usize, f64)> = Vec::with_capacity(triplets.len());
        for &(i, j, v) in triplets {
            if i >= rows || j >= cols {
                return Err(Error::Config(format!(
                    "entry ({i}, {j}) lies outside a {rows}x{cols} matrix"
                )));
            }
            if !v.is_finite() {
                return Err(Error::Config(format!("entry ({i}, {j}) is not finite")));
            }
            sorted.push((i, j, v));
        }
        sorted.sort_by_key(|&(i, j, _)| (i, j));

        let mut row_start = alloc::vec![0usize; rows + 1];
        let mut col_index = Vec::with_capacity(sorted.len());
        let mut values: Vec<f64> = Vec::with_capacity(sorted.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in sorted {
            if last == Some((i, j)) {
                *values.last_mut().expect("duplicate follows an entry") += v;
                continue;
            }
            last = Some((i, j));
            row_start[i + 1] += 1;
            col_index.push(j);
            values.push(v);
        }
        for i in 0..rows {
            row_start[i + 1] += row_start[i];
        }
        Ok(Self {
            rows,
            cols,
            row_start,
            col_index,
            values,
            counters: ApplyCounters::new(),
        })
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Stored entries as 0-based `(row, col, value)` triplets in row order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.rows).flat_map(move |i| {
            (self.row_start[i]..self.row_start[i + 1]).map(move |k| (i, self.col_index[k], self.values[k]))
        })
    }
}

impl LinearOperator for CsrOperator {
    fn rows(&self) -> usize {
        self.rows
    }

    fn cols(&self) -> usize {
        self.cols
    }

    fn counters(&self) -> &ApplyCounters {
        &self.counters
    }

    fn matvec(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            let span = self.row_start[i]..self.row_start[i + 1];
            *yi = self.col_index[span.clone()]
                .iter()
                .zip(&self.values[span])
                .map(|(&j, v)| v * x[j])
                .sum();
        }
    }

    fn matvec_adjoint(&self, y: &[f64], x: &mut [f64]) {
        x.iter_mut().for_each(|v| *v = 0.0);
        for (i, &yi) in y.iter().enumerate() {
            let span = self.row_start[i]..self.row_start[i + 1];
            for (&j, v) in self.col_index[span.clone()].iter().zip(&self.values[span]) {
                x[j] += v * yi;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linop::densify;

    #[test]
    fn duplicates_are_summed() {
        let a = CsrOperator::from_triplets(2, 3, &[(1, 2, 1.0), (0, 0, 2.0), (1, 2, 0.5)]).unwrap();
        assert_eq!(a.nnz(), 2);
        let d = densify(&a).unwrap();
        assert_eq!(d[(1, 2)], 1.5);
        assert_eq!(d[(0, 0)], 2.0);
        assert_eq!(a.apply_adjoint(&[1.0, 2.0]).unwrap(), alloc::vec![2.0, 0.0, 3.0]);
    }

    #[test]
    fn out_of_range_rejected() {
        assert!(CsrOperator::from_triplets(2, 2, &[(2, 0, 1.0)]).is_err());
        assert!(CsrOperator::from_triplets(2, 2, &[(0, 0, f64::NAN)]).is_err());
        assert!(CsrOperator::from_triplets(0, 2, &[]).is_err());
    }

    #[test]
    fn empty_rows_are_fine() {
        let a = CsrOperator::from_triplets(3, 3, &[(2, 1, 4.0)]).unwrap();
        assert_eq!(a.apply(&[1.0, 1.0, 1.0]).unwrap(), alloc::vec![0.0, 0.0, 4.0]);
        assert_eq!(a.triplets().collect::<Vec<_>>(), alloc::vec![(2, 1, 4.0)]);
    }
}
