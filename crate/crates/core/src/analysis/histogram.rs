//! FRET-efficiency histogram construction.

use crate::error::{Error, Result};

use super::gaussian::GaussianFit;

/// Binned efficiency values over a fixed range, with an optional fitted
/// Gaussian attached.
///
/// Bin `k` covers `[bin_min + k*w, bin_min + (k+1)*w)`; the last bin is
/// closed on the right so a value of exactly `bin_max` is kept. Values
/// outside `[bin_min, bin_max]` are dropped from the counts but still
/// tallied in `n_total`.
#[derive(Debug, Clone, PartialEq)]
pub struct EfficiencyHistogram {
    bin_min: f64,
    bin_max: f64,
    bin_width: f64,
    counts: Vec<usize>,
    n_in_range: usize,
    n_total: usize,
    fit: Option<GaussianFit>,
}

/// Bins `values` into `round((bin_max - bin_min) / bin_width)` bins.
///
/// The width must divide the range to within 1e-9 relative, otherwise
/// [`Error::BadBinning`] is returned.
pub fn build_histogram(
    values: &[f64],
    bin_min: f64,
    bin_max: f64,
    bin_width: f64,
) -> Result<EfficiencyHistogram> {
    if !bin_min.is_finite() || !bin_max.is_finite() || bin_max <= bin_min {
        return Err(Error::BadBinning {
            reason: format!("inverted or empty range [{bin_min}, {bin_max}]"),
        });
    }
    if !bin_width.is_finite() || bin_width <= 0.0 {
        return Err(Error::BadBinning {
            reason: format!("bin width must be > 0, got {bin_width}"),
        });
    }
    let range = bin_max - bin_min;
    let n_bins = (range / bin_width).round();
    if n_bins < 1.0 || (n_bins * bin_width - range).abs() > 1e-9 * range {
        return Err(Error::BadBinning {
            reason: format!(
                "width {bin_width} does not divide range [{bin_min}, {bin_max}] into whole bins"
            ),
        });
    }
    let n_bins = n_bins as usize;

    let mut counts = vec![0usize; n_bins];
    let mut n_in_range = 0;
    for &v in values {
        if !(bin_min..=bin_max).contains(&v) {
            continue; // out of range (or NaN): tallied in n_total only
        }
        let k = (((v - bin_min) / bin_width).floor() as usize).min(n_bins - 1);
        counts[k] += 1;
        n_in_range += 1;
    }

    Ok(EfficiencyHistogram {
        bin_min,
        bin_max,
        bin_width,
        counts,
        n_in_range,
        n_total: values.len(),
        fit: None,
    })
}

impl EfficiencyHistogram {
    pub fn bin_min(&self) -> f64 {
        self.bin_min
    }

    pub fn bin_max(&self) -> f64 {
        self.bin_max
    }

    pub fn bin_width(&self) -> f64 {
        self.bin_width
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn n_bins(&self) -> usize {
        self.counts.len()
    }

    /// Number of values that fell inside `[bin_min, bin_max]`.
    pub fn n_in_range(&self) -> usize {
        self.n_in_range
    }

    /// Number of values offered for binning, including dropped ones.
    pub fn n_total(&self) -> usize {
        self.n_total
    }

    pub fn bin_center(&self, k: usize) -> f64 {
        self.bin_min + (k as f64 + 0.5) * self.bin_width
    }

    pub fn centers(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_bins()).map(|k| self.bin_center(k))
    }

    pub fn fit(&self) -> Option<&GaussianFit> {
        self.fit.as_ref()
    }

    /// Returns the same histogram with a fitted Gaussian attached.
    pub fn with_fit(mut self, fit: GaussianFit) -> Self {
        self.fit = Some(fit);
        self
    }
}
