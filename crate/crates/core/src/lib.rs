//! Analysis chain for time-binned single-molecule FRET and ALEX photon data.
//!
//! The library covers the complete path from raw binned photon counts to
//! fitted FRET-efficiency histograms:
//!
//! - [`model`] — immutable trace, burst and parameter types
//! - [`correct`] — background autofluorescence and crosstalk subtraction
//! - [`select`] — photon-count threshold event selection
//! - [`analysis`] — per-burst observables (E, S), histogram construction,
//!   Gaussian and Förster-curve fitting
//! - [`io`] — CSV ingestion, config parsing, plot-data writers
//! - [`simulate`] — deterministic seeded synthetic-data generator with
//!   ground truth, used as the end-to-end test oracle
//!
//! All data types are immutable after construction; every operation returns
//! new values. Functions are pure and safe to run concurrently on distinct
//! inputs.

pub mod analysis;
pub mod correct;
pub mod error;
pub mod io;
pub mod model;
pub mod select;
pub mod simulate;

pub use error::{Error, Result};
