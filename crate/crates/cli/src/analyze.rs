//! The end-to-end analysis chain, in the canonical order: parse, background
//! subtraction, threshold selection, crosstalk correction, per-burst
//! efficiency, histogram, Gaussian fit, outputs.

use std::fs;
use std::path::{Path, PathBuf};

use smfret::analysis::{
    alex_burst_efficiencies, build_histogram, burst_efficiencies, fit_gaussian,
    EfficiencyHistogram, GaussianFit,
};
use smfret::correct::{
    subtract_background, subtract_background_alex, subtract_crosstalk, subtract_crosstalk_alex,
};
use smfret::io::{
    parse_config, parse_csv, render_histogram_svg, write_frequency_grid, write_frequency_grid_alex,
    write_histogram_csv, write_scatter_csv, Mode, RunConfig, ThresholdMode, TraceData,
};
use smfret::select::{threshold_alex, threshold_and, threshold_or, threshold_sum};
use smfret::{Error, Result};

use crate::summary::write_summary;

/// Event-frequency grid resolution used for `grid.csv`.
const GRID_BINS: usize = 20;

/// Everything a finished analysis run reports.
#[derive(Debug)]
pub struct AnalyzeOutcome {
    pub config: RunConfig,
    pub bins_total: usize,
    pub bursts_selected: usize,
    /// Bursts dropped because their efficiency is undefined (zero total).
    pub bursts_skipped: usize,
    /// Histogram with the fitted Gaussian attached when one was made.
    pub histogram: EfficiencyHistogram,
    /// Rows written to scatter.csv; ALEX runs only.
    pub scatter_rows: Option<usize>,
    pub warnings: Vec<String>,
    pub steps: Vec<String>,
    pub output_dir: PathBuf,
}

impl AnalyzeOutcome {
    pub fn fit(&self) -> Option<&GaussianFit> {
        self.histogram.fit()
    }
}

fn wrong_mode(cfg: &RunConfig, wanted: Mode) -> Error {
    Error::ValueOutOfDomain {
        file: cfg.config_path.clone(),
        line: 0,
        key: "mode".into(),
        value: cfg.mode.as_str().into(),
        reason: format!("this command requires mode = {}", wanted.as_str()),
    }
}

fn prepare_output_dir(cfg: &RunConfig, overridden: Option<&Path>) -> Result<PathBuf> {
    let dir = match overridden {
        Some(d) => d.to_path_buf(),
        None => cfg.resolved_output_dir(),
    };
    fs::create_dir_all(&dir).map_err(|source| Error::WriteFailed {
        path: dir.clone(),
        source,
    })?;
    Ok(dir)
}

fn fit_step(
    hist: EfficiencyHistogram,
    selected: usize,
    warnings: &mut Vec<String>,
) -> Result<EfficiencyHistogram> {
    if selected == 0 {
        warnings.push("no bursts selected; gaussian fit not attempted".into());
        return Ok(hist);
    }
    match fit_gaussian(&hist) {
        Ok(fit) => {
            if !fit.converged {
                warnings.push(format!(
                    "gaussian fit did not converge within {} iterations; parameters are the best seen",
                    fit.iterations
                ));
            }
            Ok(hist.with_fit(fit))
        }
        Err(Error::DegenerateData { reason }) => {
            warnings.push(format!("gaussian fit skipped: {reason}"));
            Ok(hist)
        }
        Err(e) => Err(e),
    }
}

/// Runs the two-channel analysis described by a config file.
pub fn run_analyze(config_path: &Path, output_dir: Option<&Path>) -> Result<AnalyzeOutcome> {
    let cfg = parse_config(config_path)?;
    if cfg.mode != Mode::Fret {
        return Err(wrong_mode(&cfg, Mode::Fret));
    }
    let out_dir = prepare_output_dir(&cfg, output_dir)?;

    let mut steps = vec![format!(
        "parse_csv(files=[{}], mode=fret)",
        cfg.input_files.join(", ")
    )];
    let parsed = parse_csv(&cfg.config_dir(), &cfg.input_files, Mode::Fret)?;
    let mut warnings = parsed.warnings;
    let TraceData::Fret(trace) = parsed.trace else {
        unreachable!("fret mode parses a fret trace");
    };

    steps.push(format!(
        "subtract_background(auto_donor={}, auto_acceptor={})",
        cfg.auto_donor, cfg.auto_acceptor
    ));
    let denoised = subtract_background(&trace, cfg.auto_donor, cfg.auto_acceptor)?;

    let selected = match cfg.threshold_mode {
        ThresholdMode::And => threshold_and(&denoised, cfg.t_donor, cfg.t_acceptor)?,
        ThresholdMode::Or => threshold_or(&denoised, cfg.t_donor, cfg.t_acceptor)?,
        // summed-channel selection bounds the total at t_donor + t_acceptor
        ThresholdMode::Sum => threshold_sum(&denoised, cfg.t_donor + cfg.t_acceptor)?,
        ThresholdMode::Alex => unreachable!("rejected at config parse"),
    };
    let corrected = subtract_crosstalk(&selected, cfg.cross_d_to_a, cfg.cross_a_to_d)?;
    steps.extend(corrected.provenance().iter().cloned());

    steps.push(format!("fret_efficiency(gamma={})", cfg.gamma));
    let (efficiencies, skipped) = burst_efficiencies(&corrected, cfg.gamma)?;

    steps.push(format!(
        "build_histogram(bin_min={}, bin_max={}, bin_width={})",
        cfg.bin_min, cfg.bin_max, cfg.bin_width
    ));
    let hist = build_histogram(&efficiencies, cfg.bin_min, cfg.bin_max, cfg.bin_width)?;
    steps.push("fit_gaussian".into());
    let hist = fit_step(hist, corrected.len(), &mut warnings)?;

    write_histogram_csv(&hist, &out_dir.join("histogram.csv"))?;
    render_histogram_svg(&hist, &out_dir.join("histogram.svg"))?;
    write_frequency_grid(&corrected, GRID_BINS, GRID_BINS, &out_dir.join("grid.csv"))?;

    let outcome = AnalyzeOutcome {
        bins_total: trace.len(),
        bursts_selected: corrected.len(),
        bursts_skipped: skipped,
        histogram: hist,
        scatter_rows: None,
        warnings,
        steps,
        output_dir: out_dir,
        config: cfg,
    };
    write_summary(&outcome)?;
    Ok(outcome)
}

/// Runs the four-channel ALEX analysis chain; additionally writes the
/// per-burst E/S scatter data.
pub fn run_analyze_alex(config_path: &Path, output_dir: Option<&Path>) -> Result<AnalyzeOutcome> {
    let cfg = parse_config(config_path)?;
    if cfg.mode != Mode::Alex {
        return Err(wrong_mode(&cfg, Mode::Alex));
    }
    let out_dir = prepare_output_dir(&cfg, output_dir)?;

    let mut steps = vec![format!(
        "parse_csv(files=[{}], mode=alex)",
        cfg.input_files.join(", ")
    )];
    let parsed = parse_csv(&cfg.config_dir(), &cfg.input_files, Mode::Alex)?;
    let mut warnings = parsed.warnings;
    let TraceData::Alex(trace) = parsed.trace else {
        unreachable!("alex mode parses an alex trace");
    };

    steps.push(format!(
        "subtract_background_alex(d_d={}, d_a={}, a_d={}, a_a={})",
        cfg.auto_donor, cfg.auto_donor, cfg.auto_acceptor, cfg.auto_acceptor
    ));
    let denoised = subtract_background_alex(
        &trace,
        cfg.auto_donor,
        cfg.auto_donor,
        cfg.auto_acceptor,
        cfg.auto_acceptor,
    )?;

    let selected = threshold_alex(&denoised, cfg.t_donor, cfg.t_acceptor)?;
    let corrected = subtract_crosstalk_alex(&selected, cfg.cross_d_to_a, cfg.cross_a_to_d)?;
    steps.extend(corrected.provenance().iter().cloned());

    steps.push(format!("alex_fret_efficiency(gamma={})", cfg.gamma));
    let (efficiencies, skipped) = alex_burst_efficiencies(&corrected, cfg.gamma)?;

    steps.push(format!(
        "build_histogram(bin_min={}, bin_max={}, bin_width={})",
        cfg.bin_min, cfg.bin_max, cfg.bin_width
    ));
    let hist = build_histogram(&efficiencies, cfg.bin_min, cfg.bin_max, cfg.bin_width)?;
    steps.push("fit_gaussian".into());
    let hist = fit_step(hist, corrected.len(), &mut warnings)?;

    steps.push(format!("stoichiometry(gamma={})", cfg.gamma));
    let scatter_rows = write_scatter_csv(&corrected, cfg.gamma, &out_dir.join("scatter.csv"))?;

    write_histogram_csv(&hist, &out_dir.join("histogram.csv"))?;
    render_histogram_svg(&hist, &out_dir.join("histogram.svg"))?;
    write_frequency_grid_alex(&corrected, GRID_BINS, GRID_BINS, &out_dir.join("grid.csv"))?;

    let outcome = AnalyzeOutcome {
        bins_total: trace.len(),
        bursts_selected: corrected.len(),
        bursts_skipped: skipped,
        histogram: hist,
        scatter_rows: Some(scatter_rows),
        warnings,
        steps,
        output_dir: out_dir,
        config: cfg,
    };
    write_summary(&outcome)?;
    Ok(outcome)
}
