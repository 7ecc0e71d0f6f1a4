//! Experiment orchestration: configuration, studies and CSV output.

pub mod config;
pub mod csvio;
pub mod output;
pub mod rates;
pub mod studies;

pub use config::ExperimentConfig;
pub use rates::{fit_order, Axis, RateReport};
pub use studies::{
    example1, max_principle_sweep, solve, spatial_rate_study, temporal_rate_study, Example1Report, SolveRun, SweepRow,
};
