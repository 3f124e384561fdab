//! Sampling when node availability changes over time: the availability
//! process, GFS-NE node exchange, and screening of poor initial sets.

mod availability;
mod exchange;
mod screen;

pub use availability::AvailabilityProcess;
pub use exchange::{
    exchange_trace, gfs_ne, sm_rank1_exchange, ExchangeConfig, ExchangeRun, ExchangeSets,
    DENOMINATOR_FLOOR,
};
pub use screen::{cutoff_frequency, screen_initial_set, CutoffOracle, ScreenOutcome};
