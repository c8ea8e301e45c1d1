//! Experiment harness around `ecm-core`: config parsing, a five-method
//! driver with on-disk artifacts, parameter sweeps, and front metrics.

pub mod config;
pub mod error;
pub mod experiment;
