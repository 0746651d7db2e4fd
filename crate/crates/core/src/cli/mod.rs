//! Command-line front end: job files, command dispatch and reports.

mod commands;
mod job;
mod report;

pub use commands::{depth_map_points, execute, matrix_json, run, Command, DEFAULT_GRID_DENOM, MAX_GRID_DENOM};
pub use job::{parse_input, parse_point, render, GroupSpec, JobSpec, Params, Term};
pub use report::{ErrorReport, Report, VERSION};
