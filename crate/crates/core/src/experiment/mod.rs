//! Batch experiment driver: configuration parsing, sweep execution and
//! CSV/report artifacts.

mod config;
mod run;
mod table;

pub use config::{
    load_config, parse_config, parse_config_at, Command, Entries, ExperimentConfig, InitialState,
    ModelSpec, Parameters, DEFAULT_DELTA, DEFAULT_EPS2, DEFAULT_EPS_PA, DEFAULT_SAMPLES,
    DEFAULT_SEED,
};
pub use run::{execute, run_experiment, run_file, Execution, RunOptions, RunOutcome, FP_ALLOWANCE};
pub use table::{ccol, col, emit_csv, Column, Table, Value, TRUNCATION_MARKER};
