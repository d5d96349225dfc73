use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid configuration: {0}")]
    Usage(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("numerical failure: {0}")]
    Numerical(#[from] randproj_core::Error),
}

impl BenchError {
    /// Process exit code: 2 for bad input, 1 for numerical failures.
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Numerical(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, BenchError>;
