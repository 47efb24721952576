//! Library half of `stratctl`: the `.strat` file format, reports and
//! command dispatch.

pub mod commands;
pub mod format;
pub mod report;

pub use commands::{execute, load, run, Cli, CliError, Command, Outcome};
pub use format::{ParseError, Section, Workspace};
pub use report::{Format, Record, Report, Status};
