//! Scenario files, runs and the datasets they produce.

mod commands;
mod config;
mod output;
mod run;
mod selfcheck;

pub use commands::{
    cmd_coeffs, cmd_fig1, cmd_propagate, cmd_sweep, fig1_data, fig1_units, sweep, sweep_threads, Fig1Data, Fig1Units, SweepPoint, SweepRow,
    SweepTable,
};
pub use config::{parse_scenario, ConfigValue, GridConfig, InitConfig, InitKind, RunConfig, Scenario};
pub use output::{fmt_num, read_snapshot, scenario_hash, Summary, Table, TOOL_VERSION};
pub use run::{
    execute, execute_endpoints, initial_soliton, initial_state, log_log_slope, model_for, Discard, RunOutcome, RunSummary, SeriesRow, SnapshotSink,
};
pub use selfcheck::{all_passed, quick_checks, ramp_scenario, run_selfcheck, Check, Fault};
