//! Scenario runner for `pwbasis-core`: JSON scenario files in, JSON or CSV
//! reports out, with one subcommand per verifier and a batch mode.
//!
//! A scenario is `{"name", "command", "parameters", "seed"?, "description"?}`;
//! unknown keys anywhere are rejected, and every offending path is listed.
//! Exit codes: 0 when every verdict passes, 1 when one fails, 2 for usage,
//! schema or input errors.

pub mod commands;
pub mod output;
pub mod run;
pub mod schema;

pub use commands::{Check, Command, Outcome, Settings};
pub use run::{
    parse_scenario, run_batch, run_command, run_file, run_scenario, Format, Report, RunOptions, Scenario, EXIT_FAIL,
    EXIT_PASS, EXIT_USAGE,
};
