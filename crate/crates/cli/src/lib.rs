//! Library surface of the batch CLI: each subcommand is a plain function
//! so the analysis chain can be driven and tested without spawning a
//! process.

pub mod analyze;
pub mod exit;
pub mod forster;
pub mod simulate;
pub mod summary;

pub use analyze::{run_analyze, run_analyze_alex, AnalyzeOutcome};
pub use exit::exit_code;
pub use forster::{run_forster, ForsterOutcome};
pub use simulate::{run_simulate, SimulateOutcome};
