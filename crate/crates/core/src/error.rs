use thiserror::Error;

use crate::dualgi::ExistenceCertificate;

/// Errors raised by the dual generalized-inverse routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {op}: {detail}")]
    Dimension { op: &'static str, detail: String },

    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare {
        op: &'static str,
        rows: usize,
        cols: usize,
    },

    #[error("the {} does not exist (deciding residual {:.3e}, tolerance {:.1e})", .0.kind.long_name(), .0.max_residual(), .0.tolerance)]
    DoesNotExist(Box<ExistenceCertificate>),

    #[error("{0}")]
    Domain(String),

    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("invalid matrix file: {0}")]
    Format(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn ensure_square(op: &'static str, rows: usize, cols: usize) -> Result<()> {
    if rows != cols {
        return Err(Error::NotSquare { op, rows, cols });
    }
    Ok(())
}
