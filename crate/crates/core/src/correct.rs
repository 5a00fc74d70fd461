//! Denoising transformations: background autofluorescence subtraction and
//! donor/acceptor crosstalk subtraction.
//!
//! Every subtraction clamps at zero; negative photon counts are physically
//! meaningless. Crosstalk uses the simultaneous form computed from the
//! pre-correction pair, so the two directions cannot couple and the result
//! does not depend on application order.

use crate::error::{Error, Result};
use crate::model::{AlexBurst, AlexBurstSet, AlexTrace, Burst, BurstSet, FretTrace};

fn require_non_negative(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || value < 0.0 {
        return Err(Error::NegativeParameter { name, value });
    }
    Ok(())
}

fn require_fraction(name: &'static str, value: f64) -> Result<()> {
    if !value.is_finite() || !(0.0..1.0).contains(&value) {
        return Err(Error::FractionOutOfRange { name, value });
    }
    Ok(())
}

fn sub_clamped(channel: &[f64], amount: f64) -> Vec<f64> {
    channel.iter().map(|&v| (v - amount).max(0.0)).collect()
}

/// Subtracts mean per-bin background from each channel, clamping at zero.
pub fn subtract_background(
    trace: &FretTrace,
    auto_donor: f64,
    auto_acceptor: f64,
) -> Result<FretTrace> {
    require_non_negative("auto_donor", auto_donor)?;
    require_non_negative("auto_acceptor", auto_acceptor)?;
    FretTrace::new(
        sub_clamped(trace.donor(), auto_donor),
        sub_clamped(trace.acceptor(), auto_acceptor),
        trace.bin_width_ms(),
    )
}

/// Per-channel background subtraction for four-channel ALEX traces, in
/// channel order `d_d, d_a, a_d, a_a`.
pub fn subtract_background_alex(
    trace: &AlexTrace,
    auto_d_d: f64,
    auto_d_a: f64,
    auto_a_d: f64,
    auto_a_a: f64,
) -> Result<AlexTrace> {
    require_non_negative("auto_d_d", auto_d_d)?;
    require_non_negative("auto_d_a", auto_d_a)?;
    require_non_negative("auto_a_d", auto_a_d)?;
    require_non_negative("auto_a_a", auto_a_a)?;
    AlexTrace::new(
        sub_clamped(trace.d_d(), auto_d_d),
        sub_clamped(trace.d_a(), auto_d_a),
        sub_clamped(trace.a_d(), auto_a_d),
        sub_clamped(trace.a_a(), auto_a_a),
        trace.bin_width_ms(),
    )
}

fn crosstalk_pair(donor: f64, acceptor: f64, cross_d_to_a: f64, cross_a_to_d: f64) -> (f64, f64) {
    // Both corrections are computed from the same pre-correction pair.
    let d = (donor - cross_a_to_d * acceptor).max(0.0);
    let a = (acceptor - cross_d_to_a * donor).max(0.0);
    (d, a)
}

fn crosstalk_step(cross_d_to_a: f64, cross_a_to_d: f64) -> String {
    format!("subtract_crosstalk(cross_DtoA={cross_d_to_a}, cross_AtoD={cross_a_to_d})")
}

/// Removes channel crosstalk from each selected event: the acceptor count
/// loses the donor-driven fraction and vice versa.
pub fn subtract_crosstalk(
    bursts: &BurstSet,
    cross_d_to_a: f64,
    cross_a_to_d: f64,
) -> Result<BurstSet> {
    require_fraction("cross_DtoA", cross_d_to_a)?;
    require_fraction("cross_AtoD", cross_a_to_d)?;
    let corrected = bursts
        .bursts()
        .iter()
        .map(|b| {
            let (d, a) = crosstalk_pair(
                b.donor_counts,
                b.acceptor_counts,
                cross_d_to_a,
                cross_a_to_d,
            );
            Burst {
                donor_counts: d,
                acceptor_counts: a,
                source_bin_index: b.source_bin_index,
            }
        })
        .collect();
    let mut provenance = bursts.provenance().to_vec();
    provenance.push(crosstalk_step(cross_d_to_a, cross_a_to_d));
    Ok(BurstSet::from_pipeline(corrected, provenance))
}

/// ALEX crosstalk correction. Applies the same simultaneous formula to the
/// donor-excitation pair (`d_d`, `a_d`); `a_a` and `d_a` are left untouched,
/// since the acceptor-excitation channel has no donor leakage by construction.
pub fn subtract_crosstalk_alex(
    bursts: &AlexBurstSet,
    cross_d_to_a: f64,
    cross_a_to_d: f64,
) -> Result<AlexBurstSet> {
    require_fraction("cross_DtoA", cross_d_to_a)?;
    require_fraction("cross_AtoD", cross_a_to_d)?;
    let corrected = bursts
        .bursts()
        .iter()
        .map(|b| {
            let (d_d, a_d) = crosstalk_pair(b.d_d_counts, b.a_d_counts, cross_d_to_a, cross_a_to_d);
            AlexBurst {
                d_d_counts: d_d,
                a_d_counts: a_d,
                d_a_counts: b.d_a_counts,
                a_a_counts: b.a_a_counts,
                source_bin_index: b.source_bin_index,
            }
        })
        .collect();
    let mut provenance = bursts.provenance().to_vec();
    provenance.push(crosstalk_step(cross_d_to_a, cross_a_to_d));
    Ok(AlexBurstSet::from_pipeline(corrected, provenance))
}
