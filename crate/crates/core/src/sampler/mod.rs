//! Shift selection, the augmented A-optimal objective and GFS greedy
//! sampling, plus the exact greedy oracle and the random baseline.

mod bound;
mod gfs;
mod oracle;
mod random;
mod shift;

pub use bound::{greedy_guarantee, supermodularity_bound};
pub use gfs::{
    block_inverse_extend, gfs_sample, gfs_sample_with, GfsOptions, GfsRun, GfsState,
    REFRESH_INTERVAL, SCHUR_FLOOR,
};
pub use oracle::{augmented_a_optimal, naive_a_optimal_greedy, naive_greedy_trajectory, objective};
pub use random::random_sample;
pub use shift::{resolve_mu, ShiftPolicy};
