//! Förster-curve fitting across datasets: reads `r,E` rows, fits R0, and
//! writes sampled curve data for plotting.

use std::fs;
use std::path::{Path, PathBuf};

use smfret::analysis::{fit_forster_curve, ForsterFit};
use smfret::io::{parse_points_csv, write_forster_curve_csv};
use smfret::{Error, Result};

const CURVE_SAMPLES: usize = 256;

#[derive(Debug)]
pub struct ForsterOutcome {
    pub fit: ForsterFit,
    pub n_points: usize,
    pub curve_path: PathBuf,
}

/// Fits the Förster distance to a points CSV. The fitted-curve samples go
/// to `forster_fit.csv` in `output_dir` (default: alongside the input).
pub fn run_forster(points_path: &Path, output_dir: Option<&Path>) -> Result<ForsterOutcome> {
    let points = parse_points_csv(points_path)?;
    let fit = fit_forster_curve(&points)?;

    let out_dir = match output_dir {
        Some(d) => d.to_path_buf(),
        None => points_path
            .parent()
            .filter(|p| !p.as_os_str().is_empty())
            .map(Path::to_path_buf)
            .unwrap_or_else(|| PathBuf::from(".")),
    };
    fs::create_dir_all(&out_dir).map_err(|source| Error::WriteFailed {
        path: out_dir.clone(),
        source,
    })?;

    let r_min = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let r_max = points.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let curve_path = out_dir.join("forster_fit.csv");
    // a single point still gets a plottable neighbourhood around it
    let (lo, hi) = if r_min < r_max {
        (r_min, r_max)
    } else {
        (r_min * 0.5, r_min * 1.5)
    };
    write_forster_curve_csv(&fit, lo, hi, CURVE_SAMPLES, &curve_path)?;

    Ok(ForsterOutcome {
        fit,
        n_points: points.len(),
        curve_path,
    })
}
