use std::fmt::Write as _;
use std::str::FromStr;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::{BenchError, MatrixKind, Result, RngKind, TrialConfig};

/// One line of a benchmark table. Times are in seconds; the four error
/// columns are maxima over the trial vectors, divided by κ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub m: usize,
    pub n: usize,
    pub l: usize,
    pub kappa: f64,
    pub matrix: MatrixKind,
    pub rng: RngKind,
    pub trials: usize,
    pub seed: u64,
    pub refine: usize,
    pub s_pre: f64,
    pub s_pro: f64,
    pub t_pre: f64,
    pub t_pro: f64,
    pub delta_norm_over_kappa: f64,
    pub epsilon_norm_over_kappa: f64,
    pub delta_rand_over_kappa: f64,
    pub epsilon_rand_over_kappa: f64,
    pub build_apply: u64,
    pub build_adjoint: u64,
    pub project_apply: u64,
    pub project_adjoint: u64,
}

impl TrialRow {
    pub fn config(&self) -> TrialConfig {
        TrialConfig {
            m: self.m,
            n: self.n,
            l: self.l,
            kappa: self.kappa,
            matrix: self.matrix,
            rng: self.rng,
            trials: self.trials,
            seed: self.seed,
            refine: self.refine,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Csv,
    #[value(name = "md")]
    Markdown,
}

impl FromStr for ReportFormat {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "md" | "markdown" => Ok(Self::Markdown),
            other => Err(BenchError::Usage(format!("unknown report format {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableKind {
    Timings,
    Errors,
}

const TIMING_COLUMNS: [&str; 4] = ["s_pre", "s_pro", "t_pre", "t_pro"];
const ERROR_COLUMNS: [&str; 4] = ["δ_norm/κ", "ε_norm/κ", "δ_rand/κ", "ε_rand/κ"];

fn table_values(row: &TrialRow, table: TableKind) -> [f64; 4] {
    match table {
        TableKind::Timings => [row.s_pre, row.s_pro, row.t_pre, row.t_pro],
        TableKind::Errors => [
            row.delta_norm_over_kappa,
            row.epsilon_norm_over_kappa,
            row.delta_rand_over_kappa,
            row.epsilon_rand_over_kappa,
        ],
    }
}

/// Renders rows as text.
///
/// CSV always carries every [`TrialRow`] field so that [`parse_csv`] can
/// read it back; `table` selects the markdown columns.
pub fn emit_report(rows: &[TrialRow], format: ReportFormat, table: TableKind) -> Result<String> {
    if rows.is_empty() {
        return Err(BenchError::Usage("no rows to report".into()));
    }
    match format {
        ReportFormat::Csv => {
            let mut writer = csv::Writer::from_writer(Vec::new());
            for row in rows {
                writer.serialize(row)?;
            }
            let bytes = writer.into_inner().map_err(|e| BenchError::Io(e.into_error()))?;
            Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
        }
        ReportFormat::Markdown => {
            let columns = match table {
                TableKind::Timings => TIMING_COLUMNS,
                TableKind::Errors => ERROR_COLUMNS,
            };
            let mut out = String::from("| m | n | l | κ |");
            for c in columns {
                write!(out, " {c} |").unwrap();
            }
            out.push_str("\n|---:|---:|---:|---:|---:|---:|---:|---:|\n");
            for row in rows {
                write!(out, "| {} | {} | {} | {:.0e} |", row.m, row.n, row.l, row.kappa).unwrap();
                for v in table_values(row, table) {
                    write!(out, " {v:.2e} |").unwrap();
                }
                out.push('\n');
            }
            Ok(out)
        }
    }
}

pub fn parse_csv(text: &str) -> Result<Vec<TrialRow>> {
    csv::Reader::from_reader(text.as_bytes())
        .deserialize()
        .map(|row| row.map_err(BenchError::from))
        .collect()
}
