//! Seeded randomized experiments over the dominance checks: random pair
//! generation with deterministic counterexample injection, agreement
//! tabulation across reference scopes, and budgeted discrepancy search.

mod config;
mod experiment;
mod random;

pub use config::{config_from_json, ConfigError, ConfigFileError, ExperimentConfig};
pub use experiment::{
    consistency_experiment, consistency_experiment_seq, report_to_csv, report_to_json,
    search_inconsistency, ConsistencyReport, DiscrepancyWitness, ReportRow, ScopePair,
};
pub use random::{equalize_mean, injected_pair, random_distribution, trial_pair};
