//! Experiment harness for GFS sampling: signal and noise generation,
//! static and time-varying sweeps, deterministic seeding and CSV output.

pub mod config;
pub mod harness;
pub mod record;
pub mod seed;
pub mod signal;
pub mod trace;

pub use config::{ExperimentConfig, Method, Reconstructor};
pub use harness::{run_dynamic, run_static, RunReport};
pub use record::{emit_csv, ExperimentRecord};

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Core(#[from] gfs_core::Error),
    #[error("csv: {0}")]
    Csv(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("{0} failed rows recorded")]
    FailedRows(usize),
}

impl From<csv::Error> for BenchError {
    fn from(e: csv::Error) -> Self {
        BenchError::Csv(e.to_string())
    }
}

impl BenchError {
    /// Process exit code: 2 for configuration problems, 3 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            BenchError::Config(_)
            | BenchError::Core(gfs_core::Error::InvalidArgument(_) | gfs_core::Error::InvalidShift(_)) => 2,
            _ => 3,
        }
    }
}
