use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use randproj_bench::io::load_triplet_file;
use randproj_bench::{
    emit_report, run_sweep, run_trial_on, BenchError, MatrixKind, ReportFormat, Result, RngKind, TableKind, TrialConfig,
};

/// Compare randomized and normal-equations null-space projections.
///
/// Comma-separated lists for --m, --n and --kappa run every combination.
#[derive(Debug, Parser)]
#[command(version)]
struct Cli {
    /// Number of rows.
    #[arg(long, value_delimiter = ',', default_value = "100")]
    m: Vec<usize>,
    /// Number of columns, a multiple of m.
    #[arg(long, value_delimiter = ',', default_value = "3000")]
    n: Vec<usize>,
    /// Sketch width [default: m + 4].
    #[arg(long)]
    l: Option<usize>,
    /// Condition number of the generated matrix; for --load, the κ used to
    /// normalize the errors.
    #[arg(long, value_delimiter = ',', default_value = "1e8")]
    kappa: Vec<f64>,
    #[arg(long, value_enum, default_value_t = MatrixKind::Sparse)]
    matrix: MatrixKind,
    #[arg(long, value_enum, default_value_t = RngKind::Lfg)]
    rng: RngKind,
    /// Random unit vectors per configuration.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Iterative-refinement passes for the randomized solve.
    #[arg(long, default_value_t = 0)]
    refine: usize,
    #[arg(long, value_enum, default_value_t = TableKind::Errors)]
    table: TableKind,
    #[arg(long, value_enum, default_value_t = ReportFormat::Markdown)]
    format: ReportFormat,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Benchmark a sparse matrix from a MatrixMarket coordinate file instead
    /// of a generated one.
    #[arg(long, conflicts_with_all = ["m", "n", "matrix"])]
    load: Option<PathBuf>,
}

impl Cli {
    fn config(&self, m: usize, n: usize, kappa: f64, matrix: MatrixKind) -> TrialConfig {
        TrialConfig {
            m,
            n,
            l: self.l.unwrap_or(m + 4),
            kappa,
            matrix,
            rng: self.rng,
            trials: self.trials,
            seed: self.seed,
            refine: self.refine,
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    let rows = if let Some(path) = &cli.load {
        let op = load_triplet_file(path)?;
        use randproj_core::LinearOperator;
        let mut rows = Vec::new();
        for &kappa in &cli.kappa {
            let config = cli.config(op.rows(), op.cols(), kappa, MatrixKind::File);
            rows.push(run_trial_on(&config, &op)?);
        }
        rows
    } else {
        let mut configs = Vec::new();
        for &m in &cli.m {
            for &n in &cli.n {
                for &kappa in &cli.kappa {
                    let config = cli.config(m, n, kappa, cli.matrix);
                    config.validate()?;
                    configs.push(config);
                }
            }
        }
        run_sweep(&configs)?
    };
    let report = emit_report(&rows, cli.format, cli.table)?;
    match &cli.out {
        Some(path) => std::fs::write(path, report)?,
        None => print!("{report}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            if let BenchError::Numerical(_) = err {
                eprintln!("hint: try a larger --l or a different --seed");
            }
            ExitCode::from(err.exit_code())
        }
    }
}
