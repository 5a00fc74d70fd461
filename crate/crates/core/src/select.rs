//! Event selection by photon-count thresholding.
//!
//! A time bin is classified as containing a fluorescent event when its
//! counts exceed the threshold strictly; ties at the threshold are excluded.
//! Each selected bin becomes one event, with no merging of adjacent bins.

use crate::error::{Error, Result};
use crate::model::{AlexBurst, AlexBurstSet, AlexTrace, Burst, BurstSet, FretTrace};

fn require_threshold(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value < 0.0 {
        return Err(Error::NegativeParameter { name, value });
    }
    Ok(())
}

fn select_fret(trace: &FretTrace, keep: impl Fn(f64, f64) -> bool, step: String) -> BurstSet {
    let bursts = trace
        .donor()
        .iter()
        .zip(trace.acceptor())
        .enumerate()
        .filter(|&(_, (&d, &a))| keep(d, a))
        .map(|(i, (&d, &a))| Burst {
            donor_counts: d,
            acceptor_counts: a,
            source_bin_index: i,
        })
        .collect();
    BurstSet::from_pipeline(bursts, vec![step])
}

/// Selects bins where donor AND acceptor counts both exceed their thresholds.
pub fn threshold_and(trace: &FretTrace, t_donor: f64, t_acceptor: f64) -> Result<BurstSet> {
    require_threshold("t_donor", t_donor)?;
    require_threshold("t_acceptor", t_acceptor)?;
    Ok(select_fret(
        trace,
        |d, a| d > t_donor && a > t_acceptor,
        format!("threshold_and(t_donor={t_donor}, t_acceptor={t_acceptor})"),
    ))
}

/// Selects bins where donor OR acceptor counts exceed their threshold.
pub fn threshold_or(trace: &FretTrace, t_donor: f64, t_acceptor: f64) -> Result<BurstSet> {
    require_threshold("t_donor", t_donor)?;
    require_threshold("t_acceptor", t_acceptor)?;
    Ok(select_fret(
        trace,
        |d, a| d > t_donor || a > t_acceptor,
        format!("threshold_or(t_donor={t_donor}, t_acceptor={t_acceptor})"),
    ))
}

/// Selects bins where the summed donor + acceptor count exceeds `t_sum`.
pub fn threshold_sum(trace: &FretTrace, t_sum: f64) -> Result<BurstSet> {
    require_threshold("t_sum", t_sum)?;
    Ok(select_fret(
        trace,
        |d, a| d + a > t_sum,
        format!("threshold_sum(t_sum={t_sum})"),
    ))
}

/// ALEX event selection: a bin is kept when the donor-excitation sum
/// `d_d + a_d` exceeds `t_dex` AND the acceptor-excitation channel `a_a`
/// exceeds `t_aex`. The second gate rejects donor-only species, which is
/// the point of ALEX sorting.
pub fn threshold_alex(trace: &AlexTrace, t_dex: f64, t_aex: f64) -> Result<AlexBurstSet> {
    require_threshold("t_dex", t_dex)?;
    require_threshold("t_aex", t_aex)?;
    let bursts = (0..trace.len())
        .filter(|&i| trace.d_d()[i] + trace.a_d()[i] > t_dex && trace.a_a()[i] > t_aex)
        .map(|i| AlexBurst {
            d_d_counts: trace.d_d()[i],
            d_a_counts: trace.d_a()[i],
            a_d_counts: trace.a_d()[i],
            a_a_counts: trace.a_a()[i],
            source_bin_index: i,
        })
        .collect();
    Ok(AlexBurstSet::from_pipeline(
        bursts,
        vec![format!("threshold_alex(t_dex={t_dex}, t_aex={t_aex})")],
    ))
}
