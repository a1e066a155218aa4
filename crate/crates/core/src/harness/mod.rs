//! Config-driven experiments with CSV and SVG output.

pub mod config;
mod run;
pub mod svg;
pub mod table;

pub use config::{ExperimentConfig, ExperimentKind};
pub use run::{run, run_and_write, run_file, symbol_nonzero_fraction, RunOutput};
pub use svg::{Plot, Series};
pub use table::{compare_runs, compare_tables, Cell, CompareReport, ResultTable};
