//! Config-driven runner for the pseudo-boson check suite.

pub mod config;
pub mod output;
pub mod suite;

pub use config::{ConfigError, SuiteConfig};
pub use suite::{exit_status, run_suite, Cell};
