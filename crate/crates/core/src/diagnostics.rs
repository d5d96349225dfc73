//! Probability bounds on the conditioning of the preconditioned operator,
//! oracle measurement of that conditioning, and projection error metrics.
//!
//! For an `m × l` matrix of i.i.d. standard normals and parameters
//! `α > 1`, `β > 0`:
//!
//! * [`pi_plus`]: probability floor for `σ_max ≤ √(2l)·α`,
//! * [`pi_minus`]: probability floor for `σ_min ≥ 1/(√l·β)`,
//! * [`pi_zero`]: their union bound, the floor for `cond ≤ √2·l·α·β`,
//! * [`pi_zero_floor`]: a simpler lower bound on `pi_zero` valid for
//!   `m ≥ 2`, `α ≥ 2`.
//!
//! Each is `1 − (failure tails)`; tails are evaluated in log space so that
//! large gaps `l − m` neither overflow nor underflow prematurely.

use alloc::format;

use crate::dense::{solve_upper_adjoint_in_place, svd_dense};
use crate::error::{Error, Result};
use crate::linop::{densify, LinearOperator};
use crate::matrix::Matrix;
use crate::precond::Preconditioner;
use crate::vector;

const PI: f64 = core::f64::consts::PI;

/// Parameters shared by the tail bounds.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TailBoundParams {
    pub l: usize,
    pub m: usize,
    pub alpha: f64,
    pub beta: f64,
}

impl TailBoundParams {
    pub fn new(l: usize, m: usize, alpha: f64, beta: f64) -> Result<Self> {
        check_upper(l, alpha)?;
        check_lower(l, m, beta)?;
        Ok(Self { l, m, alpha, beta })
    }

    pub fn pi_plus(&self) -> f64 {
        1.0 - upper_tail(self.l, self.alpha)
    }

    pub fn pi_minus(&self) -> f64 {
        1.0 - lower_tail(self.l, self.m, self.beta)
    }

    pub fn pi_zero(&self) -> f64 {
        1.0 - upper_tail(self.l, self.alpha) - lower_tail(self.l, self.m, self.beta)
    }

    pub fn pi_zero_floor(&self) -> Result<f64> {
        pi_zero_floor(self.l, self.m, self.alpha, self.beta)
    }

    pub fn cond_bound(&self) -> f64 {
        cond_bound(self.l, self.alpha, self.beta)
    }
}

fn check_upper(l: usize, alpha: f64) -> Result<()> {
    if l == 0 {
        return Err(Error::Domain("l must be positive".into()));
    }
    if !alpha.is_finite() || alpha <= 1.0 {
        return Err(Error::Domain(format!("alpha must exceed 1, got {alpha}")));
    }
    Ok(())
}

fn check_lower(l: usize, m: usize, beta: f64) -> Result<()> {
    if m == 0 || l < m {
        return Err(Error::Domain(format!("need l >= m >= 1, got l = {l}, m = {m}")));
    }
    if beta.is_nan() || beta <= 0.0 {
        return Err(Error::Domain(format!("beta must be positive, got {beta}")));
    }
    Ok(())
}

// (1/(4(α²−1)√(π·l·α²))) · (2α²/e^{α²−1})^l
fn upper_tail(l: usize, alpha: f64) -> f64 {
    let a2 = alpha * alpha;
    let lf = l as f64;
    let log = -libm::log(4.0 * (a2 - 1.0)) - 0.5 * libm::log(PI * lf * a2) + lf * (libm::log(2.0 * a2) - (a2 - 1.0));
    libm::exp(log)
}

// (1/√(2π·k)) · (e/(k·β))^k with k = l − m + 1
fn lower_tail(l: usize, m: usize, beta: f64) -> f64 {
    let k = (l - m + 1) as f64;
    if beta.is_infinite() {
        return 0.0;
    }
    let log = -0.5 * libm::log(2.0 * PI * k) + k * (1.0 - libm::log(k * beta));
    libm::exp(log)
}

/// Probability floor for the greatest singular value bound.
pub fn pi_plus(l: usize, alpha: f64) -> Result<f64> {
    check_upper(l, alpha)?;
    Ok(1.0 - upper_tail(l, alpha))
}

/// Probability floor for the least singular value bound.
pub fn pi_minus(l: usize, m: usize, beta: f64) -> Result<f64> {
    check_lower(l, m, beta)?;
    Ok(1.0 - lower_tail(l, m, beta))
}

/// Probability floor for the condition-number bound [`cond_bound`].
pub fn pi_zero(l: usize, m: usize, alpha: f64, beta: f64) -> Result<f64> {
    Ok(TailBoundParams::new(l, m, alpha, beta)?.pi_zero())
}

/// Lower bound on [`pi_zero`] with `l − m + 2` in place of `l` in the
/// upper tail. Requires `m ≥ 2` and `α ≥ 2`.
pub fn pi_zero_floor(l: usize, m: usize, alpha: f64, beta: f64) -> Result<f64> {
    check_upper(l, alpha)?;
    check_lower(l, m, beta)?;
    if m < 2 || alpha.is_nan() || alpha < 2.0 {
        return Err(Error::Domain(format!(
            "floor needs m >= 2 and alpha >= 2, got m = {m}, alpha = {alpha}"
        )));
    }
    Ok(1.0 - upper_tail(l - m + 2, alpha) - lower_tail(l, m, beta))
}

/// `√2·l·α·β`, the high-probability bound on `cond(P⁻¹·A)`.
pub fn cond_bound(l: usize, alpha: f64, beta: f64) -> f64 {
    core::f64::consts::SQRT_2 * l as f64 * alpha * beta
}

/// Dense `P⁻¹·A = (R*)⁻¹·Π·A`, for oracle use at desk scale.
pub fn preconditioned_dense<A>(pre: &Preconditioner, a: &A) -> Result<Matrix>
where
    A: LinearOperator + ?Sized,
{
    pre.check_operator(a)?;
    let mut dense = densify(a)?;
    let mut permuted = alloc::vec![0.0; a.rows()];
    for j in 0..dense.cols() {
        let col = dense.column_mut(j);
        pre.perm().apply_into(col, &mut permuted);
        solve_upper_adjoint_in_place(pre.r(), &mut permuted)?;
        col.copy_from_slice(&permuted);
    }
    Ok(dense)
}

/// Condition number of `P⁻¹·A` from a dense SVD.
pub fn measured_condition<A>(pre: &Preconditioner, a: &A) -> Result<f64>
where
    A: LinearOperator + ?Sized,
{
    Ok(svd_dense(&preconditioned_dense(pre, a)?)?.condition)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MethodTag {
    Classical,
    Randomized,
}

/// Annihilation and idempotence errors of a null-space projector, both
/// divided by the condition number.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ErrorMetrics {
    /// `‖A·z‖/κ` for the computed projection `z`.
    pub delta_over_kappa: f64,
    /// `‖z − z′‖/κ` where `z′` is the projection of `z`.
    pub epsilon_over_kappa: f64,
    pub method: MethodTag,
}

impl ErrorMetrics {
    pub fn zero(method: MethodTag) -> Self {
        Self {
            delta_over_kappa: 0.0,
            epsilon_over_kappa: 0.0,
            method,
        }
    }

    /// Entrywise maximum, for aggregating over realizations of `b`.
    pub fn max(self, other: Self) -> Self {
        Self {
            delta_over_kappa: self.delta_over_kappa.max(other.delta_over_kappa),
            epsilon_over_kappa: self.epsilon_over_kappa.max(other.epsilon_over_kappa),
            method: self.method,
        }
    }
}

/// Evaluates both metrics for one right-hand side `b`.
///
/// `project` maps `b` to its null-space projection `z`; `reproject` maps `z`
/// to `z′`. The product `A·z` goes through the uncounted kernel.
pub fn error_metrics<A, F, G>(
    a: &A,
    kappa: f64,
    method: MethodTag,
    b: &[f64],
    mut project: F,
    mut reproject: G,
) -> Result<ErrorMetrics>
where
    A: LinearOperator + ?Sized,
    F: FnMut(&[f64]) -> Result<alloc::vec::Vec<f64>>,
    G: FnMut(&[f64]) -> Result<alloc::vec::Vec<f64>>,
{
    crate::error::check_len("right-hand side", a.cols(), b.len())?;
    let z = project(b)?;
    let mut az = alloc::vec![0.0; a.rows()];
    a.matvec(&z, &mut az);
    let z2 = reproject(&z)?;
    Ok(ErrorMetrics {
        delta_over_kappa: vector::norm2(&az) / kappa,
        epsilon_over_kappa: vector::norm2(&vector::sub(&z, &z2)) / kappa,
        method,
    })
}
