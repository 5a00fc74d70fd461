//! CSV writers for histogram, scatter, frequency-grid and fitted-curve data.
//!
//! Output is byte-identical across repeated runs on identical inputs: no
//! timestamps, fixed row order, and a fixed numeric rendering with 11
//! significant digits so downstream checks are not limited by serialization.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::analysis::{alex_fret_efficiency, stoichiometry, EfficiencyHistogram, ForsterFit};
use crate::error::{Error, Result};
use crate::model::{AlexBurstSet, BurstSet};

/// Fixed-precision scientific rendering (11 significant digits).
pub(crate) fn fmt_num(x: f64) -> String {
    format!("{x:.10e}")
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| Error::WriteFailed {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes `bin_center,count,fit` rows, one per bin. The `fit` column holds
/// the fitted Gaussian evaluated at the bin center and stays empty when the
/// histogram carries no fit.
pub fn write_histogram_csv(hist: &EfficiencyHistogram, path: &Path) -> Result<()> {
    let mut out = String::from("bin_center,count,fit\n");
    for (k, &count) in hist.counts().iter().enumerate() {
        let center = hist.bin_center(k);
        let fit = match hist.fit() {
            Some(f) => fmt_num(f.evaluate(center)),
            None => String::new(),
        };
        writeln!(out, "{},{count},{fit}", fmt_num(center)).expect("string write cannot fail");
    }
    write_file(path, &out)
}

/// Writes `burst_index,E,S` rows for ALEX events. Events whose efficiency
/// is undefined (zero donor-excitation total) are omitted; the return value
/// is the number of rows written.
pub fn write_scatter_csv(bursts: &AlexBurstSet, gamma: f64, path: &Path) -> Result<usize> {
    let mut out = String::from("burst_index,E,S\n");
    let mut rows = 0;
    for b in bursts.bursts() {
        let (Ok(e), Ok(s)) = (alex_fret_efficiency(b, gamma), stoichiometry(b, gamma)) else {
            continue;
        };
        writeln!(out, "{},{},{}", b.source_bin_index, fmt_num(e), fmt_num(s))
            .expect("string write cannot fail");
        rows += 1;
    }
    write_file(path, &out)?;
    Ok(rows)
}

struct Grid {
    d_min: f64,
    d_width: f64,
    a_min: f64,
    a_width: f64,
    counts: Vec<usize>,
    d_bins: usize,
    a_bins: usize,
}

/// Bins (donor, acceptor) count pairs over a grid spanning the data. A
/// degenerate axis (all values equal, or no data) spans one unit instead.
fn build_grid(pairs: &[(f64, f64)], d_bins: usize, a_bins: usize) -> Result<Grid> {
    if d_bins == 0 || a_bins == 0 {
        return Err(Error::BadBinning {
            reason: format!("grid needs at least one bin per axis, got {d_bins}x{a_bins}"),
        });
    }
    let axis = |values: Box<dyn Iterator<Item = f64> + '_>, bins: usize| -> (f64, f64) {
        let mut min = f64::INFINITY;
        let mut max = f64::NEG_INFINITY;
        for v in values {
            min = min.min(v);
            max = max.max(v);
        }
        if !min.is_finite() || !max.is_finite() {
            (0.0, 1.0 / bins as f64)
        } else if max > min {
            (min, (max - min) / bins as f64)
        } else {
            (min, 1.0 / bins as f64)
        }
    };
    let (d_min, d_width) = axis(Box::new(pairs.iter().map(|p| p.0)), d_bins);
    let (a_min, a_width) = axis(Box::new(pairs.iter().map(|p| p.1)), a_bins);

    let mut counts = vec![0usize; d_bins * a_bins];
    for &(d, a) in pairs {
        let di = (((d - d_min) / d_width).floor() as usize).min(d_bins - 1);
        let ai = (((a - a_min) / a_width).floor() as usize).min(a_bins - 1);
        counts[di * a_bins + ai] += 1;
    }
    Ok(Grid {
        d_min,
        d_width,
        a_min,
        a_width,
        counts,
        d_bins,
        a_bins,
    })
}

fn write_grid(grid: &Grid, path: &Path) -> Result<()> {
    let mut out = String::from("d_center,a_center,count\n");
    for di in 0..grid.d_bins {
        for ai in 0..grid.a_bins {
            let d_center = grid.d_min + (di as f64 + 0.5) * grid.d_width;
            let a_center = grid.a_min + (ai as f64 + 0.5) * grid.a_width;
            writeln!(
                out,
                "{},{},{}",
                fmt_num(d_center),
                fmt_num(a_center),
                grid.counts[di * grid.a_bins + ai]
            )
            .expect("string write cannot fail");
        }
    }
    write_file(path, &out)
}

/// Writes a 2-D grid of event frequencies over (donor, acceptor) counts as
/// `d_center,a_center,count` rows — one flat format serving both heatmap
/// and 3-D renderings.
pub fn write_frequency_grid(
    bursts: &BurstSet,
    d_bins: usize,
    a_bins: usize,
    path: &Path,
) -> Result<()> {
    let pairs: Vec<(f64, f64)> = bursts
        .bursts()
        .iter()
        .map(|b| (b.donor_counts, b.acceptor_counts))
        .collect();
    write_grid(&build_grid(&pairs, d_bins, a_bins)?, path)
}

/// ALEX variant of [`write_frequency_grid`], over the donor-excitation
/// pair (`d_d`, `a_d`).
pub fn write_frequency_grid_alex(
    bursts: &AlexBurstSet,
    d_bins: usize,
    a_bins: usize,
    path: &Path,
) -> Result<()> {
    let pairs: Vec<(f64, f64)> = bursts
        .bursts()
        .iter()
        .map(|b| (b.d_d_counts, b.a_d_counts))
        .collect();
    write_grid(&build_grid(&pairs, d_bins, a_bins)?, path)
}

/// Samples the fitted Förster curve at `samples` evenly spaced separations
/// in `[r_min, r_max]` and writes `r,E_fit` rows.
pub fn write_forster_curve_csv(
    fit: &ForsterFit,
    r_min: f64,
    r_max: f64,
    samples: usize,
    path: &Path,
) -> Result<()> {
    if !(r_min > 0.0 && r_max >= r_min) || samples < 2 {
        return Err(Error::BadBinning {
            reason: format!("invalid curve sampling [{r_min}, {r_max}] x {samples}"),
        });
    }
    let mut out = String::from("r,E_fit\n");
    for i in 0..samples {
        let r = r_min + (r_max - r_min) * i as f64 / (samples - 1) as f64;
        let e = fit.evaluate(r)?;
        writeln!(out, "{},{}", fmt_num(r), fmt_num(e)).expect("string write cannot fail");
    }
    write_file(path, &out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{build_histogram, fit_gaussian};
    use crate::model::{AlexBurst, Burst};

    fn read(path: &Path) -> String {
        fs::read_to_string(path).unwrap()
    }

    #[test]
    fn histogram_csv_has_header_plus_one_row_per_bin() {
        let dir = tempfile::tempdir().unwrap();
        let hist = build_histogram(&[0.5, 0.51, 0.49], 0.0, 1.0, 0.02).unwrap();
        let path = dir.path().join("h.csv");
        write_histogram_csv(&hist, &path).unwrap();
        let text = read(&path);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 51);
        assert_eq!(lines[0], "bin_center,count,fit");
        // empty fit column, but still 3 fields
        assert_eq!(lines[1].split(',').count(), 3);
        assert!(lines[1].ends_with(','));
    }

    #[test]
    fn histogram_csv_counts_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let values: Vec<f64> = (0..500).map(|i| (i % 50) as f64 / 50.0 + 0.01).collect();
        let hist = build_histogram(&values, 0.0, 1.0, 0.02).unwrap();
        let path = dir.path().join("h.csv");
        write_histogram_csv(&hist, &path).unwrap();
        let parsed: Vec<usize> = read(&path)
            .lines()
            .skip(1)
            .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
            .collect();
        assert_eq!(parsed, hist.counts());
    }

    #[test]
    fn histogram_csv_fit_column_when_fitted() {
        let dir = tempfile::tempdir().unwrap();
        let mut values = Vec::new();
        for k in 0..50 {
            let c = (k as f64 + 0.5) * 0.02;
            let n = (100.0 * (-(c - 0.5f64).powi(2) / 0.02).exp()).round() as usize;
            values.extend(std::iter::repeat_n(c, n));
        }
        let hist = build_histogram(&values, 0.0, 1.0, 0.02).unwrap();
        let fit = fit_gaussian(&hist).unwrap();
        let hist = hist.with_fit(fit);
        let path = dir.path().join("h.csv");
        write_histogram_csv(&hist, &path).unwrap();
        let text = read(&path);
        let row = text.lines().nth(26).unwrap(); // bin 25, center 0.51
        let fit_cell = row.split(',').nth(2).unwrap();
        let value: f64 = fit_cell.parse().unwrap();
        assert!(value > 50.0, "fit near the peak should be large: {value}");
    }

    #[test]
    fn scatter_csv_rows_and_bounds() {
        let dir = tempfile::tempdir().unwrap();
        let set = AlexBurstSet::from_bursts(vec![
            AlexBurst {
                d_d_counts: 25.0,
                d_a_counts: 0.0,
                a_d_counts: 75.0,
                a_a_counts: 50.0,
                source_bin_index: 3,
            },
            AlexBurst {
                d_d_counts: 0.0,
                d_a_counts: 0.0,
                a_d_counts: 0.0,
                a_a_counts: 0.0,
                source_bin_index: 8,
            },
            AlexBurst {
                d_d_counts: 50.0,
                d_a_counts: 0.0,
                a_d_counts: 50.0,
                a_a_counts: 100.0,
                source_bin_index: 9,
            },
        ])
        .unwrap();
        let path = dir.path().join("s.csv");
        let rows = write_scatter_csv(&set, 1.0, &path).unwrap();
        assert_eq!(rows, 2); // all-zero burst omitted
        let text = read(&path);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        for line in &lines[1..] {
            let mut fields = line.split(',');
            fields.next();
            let e: f64 = fields.next().unwrap().parse().unwrap();
            let s: f64 = fields.next().unwrap().parse().unwrap();
            assert!((0.0..=1.0).contains(&e));
            assert!((0.0..=1.0).contains(&s));
        }
        assert!(lines[1].starts_with("3,"));
    }

    #[test]
    fn one_by_one_grid_conserves_burst_count() {
        let dir = tempfile::tempdir().unwrap();
        let set = BurstSet::from_bursts(
            (0..7)
                .map(|i| Burst {
                    donor_counts: i as f64,
                    acceptor_counts: 2.0 * i as f64,
                    source_bin_index: i,
                })
                .collect(),
        )
        .unwrap();
        let path = dir.path().join("g.csv");
        write_frequency_grid(&set, 1, 1, &path).unwrap();
        let text = read(&path);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[1].ends_with(",7"));
    }

    #[test]
    fn grid_total_equals_burst_count() {
        let dir = tempfile::tempdir().unwrap();
        let set = BurstSet::from_bursts(
            (0..100)
                .map(|i| Burst {
                    donor_counts: (i % 13) as f64,
                    acceptor_counts: (i % 7) as f64,
                    source_bin_index: i,
                })
                .collect(),
        )
        .unwrap();
        let path = dir.path().join("g.csv");
        write_frequency_grid(&set, 5, 4, &path).unwrap();
        let total: usize = read(&path)
            .lines()
            .skip(1)
            .map(|l| l.rsplit(',').next().unwrap().parse::<usize>().unwrap())
            .sum();
        assert_eq!(total, 100);
    }

    #[test]
    fn empty_burst_set_yields_all_zero_grid() {
        let dir = tempfile::tempdir().unwrap();
        let set = BurstSet::from_bursts(vec![]).unwrap();
        let path = dir.path().join("g.csv");
        write_frequency_grid(&set, 3, 2, &path).unwrap();
        let text = read(&path);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 1 + 6);
        assert!(lines[1..].iter().all(|l| l.ends_with(",0")));
    }

    #[test]
    fn forster_curve_samples_are_monotone_decreasing() {
        let dir = tempfile::tempdir().unwrap();
        let fit = ForsterFit {
            r0: 5.0,
            residual_sse: 0.0,
            converged: true,
        };
        let path = dir.path().join("c.csv");
        write_forster_curve_csv(&fit, 4.0, 12.0, 64, &path).unwrap();
        let values: Vec<f64> = read(&path)
            .lines()
            .skip(1)
            .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
            .collect();
        assert_eq!(values.len(), 64);
        assert!(values.windows(2).all(|w| w[1] < w[0]));
    }

    #[test]
    fn writers_are_deterministic() {
        let dir = tempfile::tempdir().unwrap();
        let hist = build_histogram(&[0.1, 0.4, 0.4, 0.9], 0.0, 1.0, 0.02).unwrap();
        let p1 = dir.path().join("a.csv");
        let p2 = dir.path().join("b.csv");
        write_histogram_csv(&hist, &p1).unwrap();
        write_histogram_csv(&hist, &p2).unwrap();
        assert_eq!(fs::read(&p1).unwrap(), fs::read(&p2).unwrap());
    }
}
