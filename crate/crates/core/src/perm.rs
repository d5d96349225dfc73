//! Permutation matrices stored as index maps.

use alloc::vec::Vec;

use crate::error::{check_len, Error, Result};
use crate::rng::SplitMix64;

/// Permutation matrix `Π` with `Π[k, p[k]] = 1`.
///
/// Applying it gathers, `(Π·x)[k] = x[p[k]]`; the adjoint scatters,
/// `(Π*·y)[p[k]] = y[k]`. For a pivoted QR `M = Q·R·Π` this means column `k`
/// of `Q·R` is column `p[k]` of `M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Permutation {
    map: Vec<usize>,
}

impl Permutation {
    pub fn identity(len: usize) -> Self {
        Self {
            map: (0..len).collect(),
        }
    }

    pub fn from_vec(map: Vec<usize>) -> Result<Self> {
        let mut seen = alloc::vec![false; map.len()];
        for &i in &map {
            if i >= map.len() || seen[i] {
                return Err(Error::Config(alloc::format!(
                    "index map is not a permutation of 0..{}",
                    map.len()
                )));
            }
            seen[i] = true;
        }
        Ok(Self { map })
    }

    /// Uniformly random permutation by Fisher–Yates.
    pub fn random(len: usize, rng: &mut SplitMix64) -> Self {
        let mut map: Vec<usize> = (0..len).collect();
        for i in (1..len).rev() {
            let j = rng.below(i as u64 + 1) as usize;
            map.swap(i, j);
        }
        Self { map }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub(crate) fn swap(&mut self, i: usize, j: usize) {
        self.map.swap(i, j);
    }

    /// `out = Π·x`
    pub fn apply_into(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.len());
        debug_assert_eq!(out.len(), self.len());
        for (o, &p) in out.iter_mut().zip(&self.map) {
            *o = x[p];
        }
    }

    /// `out = Π*·y`
    pub fn apply_adjoint_into(&self, y: &[f64], out: &mut [f64]) {
        debug_assert_eq!(y.len(), self.len());
        debug_assert_eq!(out.len(), self.len());
        for (&yk, &p) in y.iter().zip(&self.map) {
            out[p] = yk;
        }
    }

    pub fn apply(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len("permutation input", self.len(), x.len())?;
        let mut out = alloc::vec![0.0; x.len()];
        self.apply_into(x, &mut out);
        Ok(out)
    }

    pub fn apply_adjoint(&self, y: &[f64]) -> Result<Vec<f64>> {
        check_len("permutation input", self.len(), y.len())?;
        let mut out = alloc::vec![0.0; y.len()];
        self.apply_adjoint_into(y, &mut out);
        Ok(out)
    }
}
