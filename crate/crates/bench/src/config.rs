use std::fmt;

use clap::ValueEnum;
use randproj_core::rng::SketchKind;
use serde::{Deserialize, Serialize};

use crate::{BenchError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MatrixKind {
    /// Permuted circulant stencil blocks.
    Sparse,
    /// The sparse matrix plus a scaled rank-10 Gaussian product.
    Dense,
    /// An operator read from a triplet file.
    #[value(skip)]
    File,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum RngKind {
    Lfg,
    Gauss,
}

impl From<RngKind> for SketchKind {
    fn from(kind: RngKind) -> Self {
        match kind {
            RngKind::Lfg => SketchKind::LaggedFibonacci,
            RngKind::Gauss => SketchKind::Gaussian,
        }
    }
}

impl fmt::Display for MatrixKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Sparse => "sparse",
            Self::Dense => "dense",
            Self::File => "file",
        })
    }
}

impl fmt::Display for RngKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Lfg => "lfg",
            Self::Gauss => "gauss",
        })
    }
}

/// One benchmark configuration.
#[derive(Clone, Debug, PartialEq)]
pub struct TrialConfig {
    pub m: usize,
    pub n: usize,
    pub l: usize,
    pub kappa: f64,
    pub matrix: MatrixKind,
    pub rng: RngKind,
    pub trials: usize,
    pub seed: u64,
    pub refine: usize,
}

impl TrialConfig {
    /// Sparse matrix, lagged-Fibonacci sketch, 100 trials, `l = m + 4`.
    pub fn new(m: usize, n: usize, kappa: f64) -> Self {
        Self {
            m,
            n,
            l: m + 4,
            kappa,
            matrix: MatrixKind::Sparse,
            rng: RngKind::Lfg,
            trials: 100,
            seed: 0,
            refine: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(BenchError::Usage(msg));
        if self.m == 0 {
            return fail("m must be positive".into());
        }
        if !(self.m <= self.l && self.l <= self.n) {
            return fail(format!(
                "need m <= l <= n, got m = {}, l = {}, n = {}",
                self.m, self.l, self.n
            ));
        }
        if self.matrix != MatrixKind::File {
            if !self.n.is_multiple_of(self.m) {
                return fail(format!("n = {} is not a multiple of m = {}", self.n, self.m));
            }
            if self.m < 4 {
                return fail(format!("generated test matrices need m >= 4, got {}", self.m));
            }
        }
        if self.trials == 0 {
            return fail("trials must be at least 1".into());
        }
        if !(self.kappa.is_finite() && self.kappa >= 1.0) {
            return fail(format!("kappa must be finite and at least 1, got {}", self.kappa));
        }
        Ok(())
    }
}
