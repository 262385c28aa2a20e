//! Monte Carlo experiments: sample sections, build their zero curves,
//! measure them, and turn the measurements into event frequencies.
//!
//! Runs are deterministic: each trial seed is a counter-derived function of
//! the master seed, trials run in parallel but are stored in a fixed order,
//! and wall-clock times never reach the output files.

pub mod config;
pub mod report;
pub mod stats;
pub mod trial;

pub use config::{ADRule, ExperimentConfig, Observable};
pub use report::{event_frequency, run_trials, summarize, DegreeSummary, Event, EventKind, ObservableReport, ReportSummary, Threshold};
pub use stats::{scaling_fit, wilson, Frequency, ScalingFit};
pub use trial::{observe_section, run_trial, trial_seed, TrialRecord};
