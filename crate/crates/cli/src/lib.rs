//! Command-line front end for the `fvcw` solver.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use commands::{execute, run_with_snapshots, scheme_path, snapshot_path};
pub use config::{parse_config, read_config_file, Invocation, RunConfig, VALID_KEYS};
pub use error::{CliError, Result};
pub use output::{read_field_csv, write_field_csv, write_trace_csv};

/// Parses `args`, runs the command and returns the process exit status.
/// Errors go to `err` as a single `error: kind=... message=...` line.
pub fn main_with<I, T>(args: I, out: &mut dyn std::io::Write, err: &mut dyn std::io::Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match parse_config(args).and_then(|inv| execute(&inv, out)) {
        Ok(()) => 0,
        Err(CliError::Info(text)) => {
            let _ = write!(out, "{text}");
            0
        }
        Err(e) => {
            let _ = writeln!(err, "{}", e.report_line());
            e.exit_code()
        }
    }
}
