use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("graph generation failed after {attempts} attempts: {reason}")]
    GenerationFailed { attempts: usize, reason: String },

    #[error("{path}:{line}: {reason}")]
    Parse {
        path: PathBuf,
        line: usize,
        reason: String,
    },

    #[error("{path}:{line}: duplicate edge ({i}, {j})")]
    DuplicateEdge {
        path: PathBuf,
        line: usize,
        i: usize,
        j: usize,
    },

    #[error("{path}:{line}: self-loop on node {node}")]
    SelfLoop {
        path: PathBuf,
        line: usize,
        node: usize,
    },

    #[error("symmetric eigensolver did not converge")]
    ConvergenceFailure,

    #[error("shift {0} is outside (0, 1)")]
    InvalidShift(f64),

    #[error("submatrix is singular")]
    SingularSubmatrix,

    #[error("Schur complement {0:e} is not positive")]
    NonPositiveSchur(f64),

    #[error("Sherman-Morrison denominator {0:e} vanishes")]
    DegenerateUpdate(f64),

    #[error("only {available} nodes available for a sample set of size {required}")]
    InfeasibleAvailability { available: usize, required: usize },

    #[error("sampling operator has rank {rank}, bandwidth {bandwidth} required")]
    RankDeficient { rank: usize, bandwidth: usize },

    #[error("length mismatch: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
