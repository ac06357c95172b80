use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, found {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("vector is not unit norm (norm = {norm})")]
    NotUnit { norm: f64 },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not unitary (max deviation {deviation:e})")]
    NotUnitary { deviation: f64 },

    #[error("{0} must be nonzero")]
    Zero(&'static str),

    #[error("Jacobi iteration did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    #[error("invalid register layout: {0}")]
    InvalidLayout(String),

    #[error("learning rate {eta} exceeds the stability bound 2/lambda_max = {bound}")]
    UnstableLearningRate { eta: f64, bound: f64 },

    #[error(
        "input has success probability {success_probability:e} on the principal subspace; \
         nothing to amplify"
    )]
    DegenerateInput { success_probability: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Process exit status for the command-line runner: 3 for a degenerate
    /// input, 4 for I/O, 2 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::DegenerateInput { .. } => 3,
            Error::Io { .. } => 4,
            _ => 2,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_codes() {
        assert_eq!(
            Error::DegenerateInput {
                success_probability: 0.0
            }
            .exit_code(),
            3
        );
        assert_eq!(Error::io("x", std::io::Error::other("boom")).exit_code(), 4);
        assert_eq!(Error::Config("bad".into()).exit_code(), 2);
        assert_eq!(
            Error::UnstableLearningRate {
                eta: 40.0,
                bound: 33.3
            }
            .exit_code(),
            2
        );
    }
}
