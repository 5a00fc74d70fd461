//! File ingestion and output: binned CSV parsing, run configuration, and
//! plot-data writers.
//!
//! There is no canonical on-disk schema in this field; the formats here are
//! a clean-room definition. Anything exotic must be pre-converted to the
//! plain CSV layouts documented on [`parse_csv`].

mod config;
mod svg;
mod trace_csv;
mod writers;

pub use config::{parse_config, Mode, RunConfig, ThresholdMode};
pub use svg::render_histogram_svg;
pub use trace_csv::{
    parse_csv, parse_points_csv, write_alex_trace_csv, write_fret_trace_csv, ParsedCsv, TraceData,
};
pub use writers::{
    write_forster_curve_csv, write_frequency_grid, write_frequency_grid_alex, write_histogram_csv,
    write_scatter_csv,
};
