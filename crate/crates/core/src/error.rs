use alloc::string::String;
use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A vector or matrix argument has the wrong length.
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    /// Invalid construction or run parameters.
    Config(String),
    /// A factorization was asked for on a matrix of the wrong shape.
    Shape {
        rows: usize,
        cols: usize,
        reason: &'static str,
    },
    /// Triangular factor with a zero on the diagonal.
    SingularFactor { index: usize },
    /// Neither Cholesky nor pivoted LU could invert the matrix.
    Factorization(&'static str),
    /// Dense oracle request larger than the configured entry cap.
    SizeCap { entries: usize, cap: usize },
    /// The sketch `A·G` is numerically rank-deficient. Drawing a fresh `G`
    /// and rebuilding is expected to succeed.
    RankDeficient { index: usize, ratio: f64 },
    /// Every reseeded build attempt hit [`Error::RankDeficient`].
    RetriesExhausted { attempts: usize },
    /// Arguments outside the domain of a bound formula.
    Domain(String),
}

impl Error {
    /// Whether rebuilding with fresh randomness may succeed.
    pub fn is_retriable(&self) -> bool {
        matches!(self, Error::RankDeficient { .. })
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Dimension { what, expected, found } => {
                write!(f, "dimension mismatch for {what}: expected {expected}, found {found}")
            }
            Error::Config(msg) => write!(f, "invalid configuration: {msg}"),
            Error::Shape { rows, cols, reason } => {
                write!(f, "unsupported shape {rows}x{cols}: {reason}")
            }
            Error::SingularFactor { index } => {
                write!(f, "triangular factor is singular: zero diagonal at index {index}")
            }
            Error::Factorization(msg) => write!(f, "factorization failed: {msg}"),
            Error::SizeCap { entries, cap } => {
                write!(f, "dense request of {entries} entries exceeds the cap of {cap}")
            }
            Error::RankDeficient { index, ratio } => write!(
                f,
                "sketch is numerically rank-deficient at pivot {index} (|r_kk|/|r_00| = {ratio:e})"
            ),
            Error::RetriesExhausted { attempts } => {
                write!(f, "sketch stayed rank-deficient after {attempts} attempts")
            }
            Error::Domain(msg) => write!(f, "argument outside formula domain: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub(crate) fn check_len(what: &'static str, expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { what, expected, found })
    }
}
