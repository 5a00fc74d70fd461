//! Per-burst FRET observables, histogram construction, and model fitting.
//!
//! The gamma factor enters only at efficiency computation; stored channel
//! counts are never rescaled, so raw and corrected data stay distinguishable.

mod forster;
mod gaussian;
mod histogram;

pub use forster::{fit_forster_curve, ForsterFit};
pub use gaussian::{
    fit_gaussian, fit_gaussian_curve, gaussian_gradient, gaussian_value, GaussianFit,
};
pub use histogram::{build_histogram, EfficiencyHistogram};

use crate::error::{Error, Result};
use crate::model::{AlexBurst, AlexBurstSet, BurstSet};

fn require_gamma(gamma: f64) -> Result<()> {
    if !gamma.is_finite() || gamma <= 0.0 {
        return Err(Error::NonPositiveGamma(gamma));
    }
    Ok(())
}

fn require_count(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value < 0.0 {
        return Err(Error::NegativeParameter { name, value });
    }
    Ok(())
}

/// FRET efficiency of one event: `n_a / (n_a + gamma * n_d)`.
///
/// Returns [`Error::ZeroTotal`] for an empty burst (no photons in either
/// channel); callers either propagate or skip-and-tally, see
/// [`burst_efficiencies`].
pub fn fret_efficiency(n_a: f64, n_d: f64, gamma: f64) -> Result<f64> {
    require_count("n_a", n_a)?;
    require_count("n_d", n_d)?;
    require_gamma(gamma)?;
    let total = n_a + gamma * n_d;
    if total <= 0.0 {
        return Err(Error::ZeroTotal);
    }
    Ok(n_a / total)
}

/// Uncorrected FRET efficiency: `n_a / (n_a + n_d)`.
pub fn proximity_ratio(n_a: f64, n_d: f64) -> Result<f64> {
    fret_efficiency(n_a, n_d, 1.0)
}

/// Transfer efficiency at dye separation `r` for Förster distance `r0`:
/// `1 / (1 + (r/r0)^6)`.
pub fn forster_efficiency(r: f64, r0: f64) -> Result<f64> {
    if !r.is_finite() || r <= 0.0 {
        return Err(Error::NonPositiveDistance {
            name: "r",
            value: r,
        });
    }
    if !r0.is_finite() || r0 <= 0.0 {
        return Err(Error::NonPositiveDistance {
            name: "r0",
            value: r0,
        });
    }
    Ok(1.0 / (1.0 + (r / r0).powi(6)))
}

/// FRET efficiency of an ALEX event, computed from the two donor-excitation
/// channels: `a_d / (a_d + gamma * d_d)`.
pub fn alex_fret_efficiency(burst: &AlexBurst, gamma: f64) -> Result<f64> {
    fret_efficiency(burst.a_d_counts, burst.d_d_counts, gamma)
}

/// Fluorophore stoichiometry of an ALEX event:
/// `(gamma * d_d + a_d) / (gamma * d_d + a_d + a_a)`.
///
/// Dual-labelled molecules sit at intermediate S, donor-only species at
/// S ~ 1, acceptor-only species at S ~ 0.
pub fn stoichiometry(burst: &AlexBurst, gamma: f64) -> Result<f64> {
    require_count("d_d", burst.d_d_counts)?;
    require_count("a_d", burst.a_d_counts)?;
    require_count("a_a", burst.a_a_counts)?;
    require_gamma(gamma)?;
    let dex = gamma * burst.d_d_counts + burst.a_d_counts;
    let total = dex + burst.a_a_counts;
    if total <= 0.0 {
        return Err(Error::ZeroTotal);
    }
    Ok(dex / total)
}

/// Efficiencies for every burst in a set. Degenerate (zero-total) bursts are
/// skipped; the second element tallies how many were dropped.
pub fn burst_efficiencies(bursts: &BurstSet, gamma: f64) -> Result<(Vec<f64>, usize)> {
    require_gamma(gamma)?;
    let mut values = Vec::with_capacity(bursts.len());
    let mut skipped = 0;
    for b in bursts.bursts() {
        match fret_efficiency(b.acceptor_counts, b.donor_counts, gamma) {
            Ok(e) => values.push(e),
            Err(Error::ZeroTotal) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok((values, skipped))
}

/// ALEX variant of [`burst_efficiencies`], using the donor-excitation pair.
pub fn alex_burst_efficiencies(bursts: &AlexBurstSet, gamma: f64) -> Result<(Vec<f64>, usize)> {
    require_gamma(gamma)?;
    let mut values = Vec::with_capacity(bursts.len());
    let mut skipped = 0;
    for b in bursts.bursts() {
        match alex_fret_efficiency(b, gamma) {
            Ok(e) => values.push(e),
            Err(Error::ZeroTotal) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    Ok((values, skipped))
}
