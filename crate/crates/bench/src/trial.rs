use std::time::{Duration, Instant};

use randproj_core::diagnostics::{error_metrics, ErrorMetrics, MethodTag};
use randproj_core::linop::{make_dense_test, make_sparse_test, LinearOperator};
use randproj_core::precond::build_preconditioner_with_retry;
use randproj_core::projector::{classical_project, project, refine_lstsq, solve_lstsq, ClassicalProjector};
use randproj_core::rng::{derive_seed, GaussianStream, SketchSource};
use randproj_core::{vector, Preconditioner};

use crate::{BenchError, MatrixKind, Result, TrialConfig, TrialRow};

const MATRIX_STREAM: u64 = 0;
const SKETCH_STREAM: u64 = 1;
const VECTOR_STREAM: u64 = 2;

/// Phases shorter than this are repeated three times and the median kept.
const SHORT_PHASE: Duration = Duration::from_millis(50);

fn median3(mut t: [Duration; 3]) -> Duration {
    t.sort();
    t[1]
}

/// Times `f`, repeating short phases. Returns the last result.
fn timed<T>(mut f: impl FnMut() -> Result<T>) -> Result<(T, f64)> {
    let start = Instant::now();
    let mut value = f()?;
    let first = start.elapsed();
    if first >= SHORT_PHASE {
        return Ok((value, first.as_secs_f64()));
    }
    let mut samples = [first; 3];
    for sample in &mut samples[1..] {
        let start = Instant::now();
        value = f()?;
        *sample = start.elapsed();
    }
    Ok((value, median3(samples).as_secs_f64()))
}

struct UnitVectors {
    stream: GaussianStream,
    n: usize,
}

impl UnitVectors {
    fn new(seed: u64, n: usize) -> Self {
        Self {
            stream: GaussianStream::new(derive_seed(seed, VECTOR_STREAM)),
            n,
        }
    }

    fn next(&mut self) -> Vec<f64> {
        let mut b = self.stream.column(self.n);
        let norm = vector::norm2(&b);
        b.iter_mut().for_each(|x| *x /= norm);
        b
    }
}

fn randomized_null<A>(pre: &Preconditioner, a: &A, b: &[f64], refine: usize) -> randproj_core::Result<Vec<f64>>
where
    A: LinearOperator + ?Sized,
{
    if refine == 0 {
        return Ok(project(pre, a, b)?.null_projection);
    }
    let h = solve_lstsq(pre, a, b)?;
    let h = refine_lstsq(pre, a, b, &h, refine)?;
    Ok(vector::sub(b, &a.apply_adjoint(&h)?))
}

/// Per-vector time of `f` over the trial vectors, plus the maximal metrics.
fn measure<F>(
    config: &TrialConfig,
    a: &(impl LinearOperator + ?Sized),
    tag: MethodTag,
    f: F,
) -> Result<(ErrorMetrics, f64)>
where
    F: Fn(&[f64]) -> randproj_core::Result<Vec<f64>>,
{
    let mut vectors = UnitVectors::new(config.seed, config.n);
    let mut worst = ErrorMetrics::zero(tag);
    let mut elapsed = Duration::ZERO;
    for _ in 0..config.trials {
        let b = vectors.next();
        let metrics = error_metrics(
            a,
            config.kappa,
            tag,
            &b,
            |v| {
                let start = Instant::now();
                let z = f(v);
                elapsed += start.elapsed();
                z
            },
            &f,
        )?;
        worst = worst.max(metrics);
    }
    if elapsed >= SHORT_PHASE {
        return Ok((worst, elapsed.as_secs_f64() / config.trials as f64));
    }
    let mut samples = [elapsed; 3];
    for sample in &mut samples[1..] {
        let mut vectors = UnitVectors::new(config.seed, config.n);
        let mut total = Duration::ZERO;
        for _ in 0..config.trials {
            let b = vectors.next();
            let start = Instant::now();
            f(&b)?;
            total += start.elapsed();
        }
        *sample = total;
    }
    Ok((worst, median3(samples).as_secs_f64() / config.trials as f64))
}

/// Runs one configuration on the generated test matrix it names.
pub fn run_trial(config: &TrialConfig) -> Result<TrialRow> {
    config.validate()?;
    let seed = derive_seed(config.seed, MATRIX_STREAM);
    match config.matrix {
        MatrixKind::Sparse => run_trial_on(config, &make_sparse_test(config.m, config.n, config.kappa, seed)?),
        MatrixKind::Dense => run_trial_on(config, &make_dense_test(config.m, config.n, config.kappa, seed)?),
        MatrixKind::File => Err(BenchError::Usage(
            "file operators must be passed to run_trial_on".into(),
        )),
    }
}

/// Runs one configuration on a caller-supplied operator, normalizing errors
/// by `config.kappa`.
pub fn run_trial_on<A>(config: &TrialConfig, a: &A) -> Result<TrialRow>
where
    A: LinearOperator + ?Sized,
{
    config.validate()?;
    if (a.rows(), a.cols()) != (config.m, config.n) {
        return Err(BenchError::Usage(format!(
            "operator is {}x{}, configuration says {}x{}",
            a.rows(),
            a.cols(),
            config.m,
            config.n
        )));
    }

    let sketch_seed = derive_seed(config.seed, SKETCH_STREAM);
    let (pre, t_pre) = timed(|| {
        Ok(build_preconditioner_with_retry(
            a,
            config.l,
            config.rng.into(),
            sketch_seed,
        )?)
    })?;
    let build = pre.build_counts();

    let probe = UnitVectors::new(config.seed, config.n).next();
    let before = a.counts();
    project(&pre, a, &probe)?;
    let per_projection = a.counts() - before;

    let (rand, t_pro) = measure(config, a, MethodTag::Randomized, |v| {
        randomized_null(&pre, a, v, config.refine)
    })?;

    // The baseline may legitimately fail on ill-conditioned inputs; its
    // columns are then reported as NaN.
    let classical = timed(|| Ok(ClassicalProjector::new(a)?)).ok();
    let (s_pre, s_pro, norm) = match classical {
        Some((cp, s_pre)) => {
            match measure(config, a, MethodTag::Classical, |v| {
                Ok(classical_project(&cp, a, v)?.null_projection)
            }) {
                Ok((norm, s_pro)) => (s_pre, s_pro, Some(norm)),
                Err(_) => (s_pre, f64::NAN, None),
            }
        }
        None => (f64::NAN, f64::NAN, None),
    };
    let (delta_norm, epsilon_norm) = norm.map_or((f64::NAN, f64::NAN), |m| (m.delta_over_kappa, m.epsilon_over_kappa));

    Ok(TrialRow {
        m: config.m,
        n: config.n,
        l: config.l,
        kappa: config.kappa,
        matrix: config.matrix,
        rng: config.rng,
        trials: config.trials,
        seed: config.seed,
        refine: config.refine,
        s_pre,
        s_pro,
        t_pre,
        t_pro,
        delta_norm_over_kappa: delta_norm,
        epsilon_norm_over_kappa: epsilon_norm,
        delta_rand_over_kappa: rand.delta_over_kappa,
        epsilon_rand_over_kappa: rand.epsilon_over_kappa,
        build_apply: build.apply,
        build_adjoint: build.adjoint,
        project_apply: per_projection.apply,
        project_adjoint: per_projection.adjoint,
    })
}

pub fn run_sweep(configs: &[TrialConfig]) -> Result<Vec<TrialRow>> {
    configs.iter().map(run_trial).collect()
}
