//! Sweep harness for monitored-circuit mirror experiments: configuration,
//! the per-instance pipeline, aggregation, CSV/SVG output, and the
//! acceptance suites behind the `verify` command.

pub mod config;
pub mod csvio;
pub mod pipeline;
pub mod plot;
pub mod sweep;
pub mod verify;
