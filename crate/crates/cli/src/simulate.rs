//! Synthetic-data generation from a config file. The trace is written to
//! the single `input_files` entry (resolved against the config directory),
//! so the same config can immediately drive `analyze` on the fresh data;
//! the per-bin ground truth goes to a `.truth.csv` sidecar next to it.

use std::fs;
use std::path::{Path, PathBuf};

use smfret::io::{parse_config, write_alex_trace_csv, write_fret_trace_csv, Mode};
use smfret::simulate::{
    simulate_alex_trace, simulate_fret_trace, write_alex_ground_truth_csv,
    write_fret_ground_truth_csv,
};
use smfret::{Error, Result};

#[derive(Debug)]
pub struct SimulateOutcome {
    pub trace_path: PathBuf,
    pub truth_path: PathBuf,
    pub n_bins: usize,
    pub burst_bins: usize,
}

/// Generates a seeded trace as configured; `seed_override` replaces the
/// config's seed when given.
pub fn run_simulate(config_path: &Path, seed_override: Option<u64>) -> Result<SimulateOutcome> {
    let cfg = parse_config(config_path)?;
    let params = cfg.sim_params(seed_override)?;
    if cfg.input_files.len() != 1 {
        return Err(Error::ValueOutOfDomain {
            file: cfg.config_path.clone(),
            line: 0,
            key: "input_files".into(),
            value: cfg.input_files.join(", "),
            reason: "simulate writes exactly one trace file".into(),
        });
    }

    let file = &cfg.input_files[0];
    let trace_path = if Path::new(file).is_absolute() {
        PathBuf::from(file)
    } else {
        cfg.config_dir().join(file)
    };
    if let Some(parent) = trace_path.parent() {
        if !parent.as_os_str().is_empty() {
            fs::create_dir_all(parent).map_err(|source| Error::WriteFailed {
                path: parent.to_path_buf(),
                source,
            })?;
        }
    }
    let truth_path = trace_path.with_extension("truth.csv");

    let burst_bins = match cfg.mode {
        Mode::Fret => {
            let (trace, truth) = simulate_fret_trace(&params)?;
            write_fret_trace_csv(&trace, &trace_path)?;
            write_fret_ground_truth_csv(&truth, &truth_path)?;
            truth.iter().filter(|t| t.is_burst).count()
        }
        Mode::Alex => {
            let brightness = cfg
                .acceptor_brightness
                .ok_or_else(|| Error::MissingRequiredKey {
                    file: cfg.config_path.clone(),
                    key: "acceptor_brightness",
                })?;
            let (trace, truth) = simulate_alex_trace(&params, brightness)?;
            write_alex_trace_csv(&trace, &trace_path)?;
            write_alex_ground_truth_csv(&truth, &truth_path)?;
            truth.iter().filter(|t| t.is_burst).count()
        }
    };

    Ok(SimulateOutcome {
        trace_path,
        truth_path,
        n_bins: params.n_bins,
        burst_bins,
    })
}
