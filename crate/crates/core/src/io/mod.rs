//! Readers and writers for the file formats.

pub mod lp;
pub mod native;
pub mod report;
pub mod sndlib;
pub mod solution;

use thiserror::Error;

pub use lp::{parse_lp_mini, LpModel};
pub use native::{parse_graph_text, write_graph_text};
pub use report::{write_bounds_csv, write_metrics_csv, write_sweep_csv, ReportOptions};
pub use sndlib::{builtin_sndlib, load_sndlib, parse_sndlib, SndlibTopology, BUILTIN_TOPOLOGIES};
pub use solution::{parse_solution_text, write_solution_text, SolutionFile};

/// A parse failure with a 1-based position.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("line {line}, column {column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }
}
