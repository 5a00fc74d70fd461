//! The single human-readable record of a run: parameters, pipeline step
//! trace, stage counts, fit results and warnings. Deliberately free of
//! timestamps so identical inputs produce identical bytes.

use std::fmt::Write as _;
use std::fs;

use smfret::{Error, Result};

use crate::analyze::AnalyzeOutcome;

pub fn write_summary(outcome: &AnalyzeOutcome) -> Result<()> {
    let cfg = &outcome.config;
    let mut s = String::new();
    let w = &mut s;

    writeln!(w, "analysis summary").unwrap();
    writeln!(w, "================").unwrap();
    writeln!(w).unwrap();
    writeln!(w, "mode = {}", cfg.mode.as_str()).unwrap();
    writeln!(w, "threshold_mode = {}", cfg.threshold_mode.as_str()).unwrap();
    writeln!(w, "input_files = {}", cfg.input_files.join(", ")).unwrap();
    writeln!(w).unwrap();

    writeln!(w, "parameters").unwrap();
    writeln!(w, "----------").unwrap();
    writeln!(w, "auto_donor = {}", cfg.auto_donor).unwrap();
    writeln!(w, "auto_acceptor = {}", cfg.auto_acceptor).unwrap();
    writeln!(w, "t_donor = {}", cfg.t_donor).unwrap();
    writeln!(w, "t_acceptor = {}", cfg.t_acceptor).unwrap();
    writeln!(w, "cross_DtoA = {}", cfg.cross_d_to_a).unwrap();
    writeln!(w, "cross_AtoD = {}", cfg.cross_a_to_d).unwrap();
    writeln!(w, "gamma = {}", cfg.gamma).unwrap();
    writeln!(w, "bin_min = {}", cfg.bin_min).unwrap();
    writeln!(w, "bin_max = {}", cfg.bin_max).unwrap();
    writeln!(w, "bin_width = {}", cfg.bin_width).unwrap();
    writeln!(w).unwrap();

    writeln!(w, "pipeline").unwrap();
    writeln!(w, "--------").unwrap();
    for (i, step) in outcome.steps.iter().enumerate() {
        writeln!(w, "{}. {step}", i + 1).unwrap();
    }
    writeln!(w).unwrap();

    writeln!(w, "counts").unwrap();
    writeln!(w, "------").unwrap();
    writeln!(w, "bins_total = {}", outcome.bins_total).unwrap();
    writeln!(w, "bursts_selected = {}", outcome.bursts_selected).unwrap();
    writeln!(w, "bursts_skipped_zero_total = {}", outcome.bursts_skipped).unwrap();
    writeln!(w, "histogram_in_range = {}", outcome.histogram.n_in_range()).unwrap();
    writeln!(w, "histogram_total = {}", outcome.histogram.n_total()).unwrap();
    if let Some(rows) = outcome.scatter_rows {
        writeln!(w, "scatter_rows = {rows}").unwrap();
    }
    writeln!(w).unwrap();

    writeln!(w, "gaussian fit").unwrap();
    writeln!(w, "------------").unwrap();
    match outcome.histogram.fit() {
        Some(fit) => {
            writeln!(w, "converged = {}", fit.converged).unwrap();
            writeln!(w, "amplitude = {}", fit.amplitude).unwrap();
            writeln!(w, "mean = {}", fit.mean).unwrap();
            writeln!(w, "sigma = {}", fit.sigma).unwrap();
            writeln!(w, "residual_sse = {}", fit.residual_sse).unwrap();
            writeln!(w, "iterations = {}", fit.iterations).unwrap();
        }
        None => writeln!(w, "(none)").unwrap(),
    }
    writeln!(w).unwrap();

    writeln!(w, "warnings").unwrap();
    writeln!(w, "--------").unwrap();
    if outcome.warnings.is_empty() {
        writeln!(w, "(none)").unwrap();
    } else {
        for warning in &outcome.warnings {
            writeln!(w, "{warning}").unwrap();
        }
    }
    writeln!(w).unwrap();

    writeln!(w, "outputs").unwrap();
    writeln!(w, "-------").unwrap();
    writeln!(w, "histogram.csv").unwrap();
    writeln!(w, "histogram.svg").unwrap();
    writeln!(w, "grid.csv").unwrap();
    if outcome.scatter_rows.is_some() {
        writeln!(w, "scatter.csv").unwrap();
    }
    writeln!(w, "summary.txt").unwrap();

    let path = outcome.output_dir.join("summary.txt");
    fs::write(&path, s).map_err(|source| Error::WriteFailed { path, source })
}
