//! Core immutable data structures: binned fluorescence traces, selected
//! bursts, and correction parameters.
//!
//! Counts are stored as `f64` rather than integers because background and
//! crosstalk subtraction produce fractional values. Raw ingestion flags
//! non-integer input as a lint warning only (see [`crate::io::parse_csv`]).
//! Bin width is carried as metadata and never enters any arithmetic.

use crate::error::{Error, Result};

fn check_counts(channel: &[f64]) -> Result<()> {
    if channel.is_empty() {
        return Err(Error::EmptyTrace);
    }
    for (bin, &v) in channel.iter().enumerate() {
        if !v.is_finite() || v < 0.0 {
            return Err(Error::NegativeCount { bin, value: v });
        }
    }
    Ok(())
}

fn check_same_len(a: &[f64], b: &[f64]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

fn check_bin_width(w: f64) -> Result<()> {
    if !w.is_finite() || w <= 0.0 {
        return Err(Error::NonPositiveBinWidth(w));
    }
    Ok(())
}

/// Paired donor/acceptor photon counts per time bin (continuous excitation).
#[derive(Debug, Clone, PartialEq)]
pub struct FretTrace {
    donor: Vec<f64>,
    acceptor: Vec<f64>,
    bin_width_ms: f64,
}

impl FretTrace {
    /// Builds a two-channel trace from per-bin photon counts.
    ///
    /// The channels must be non-empty, equal in length, and non-negative.
    pub fn new(donor: Vec<f64>, acceptor: Vec<f64>, bin_width_ms: f64) -> Result<Self> {
        check_same_len(&donor, &acceptor)?;
        check_counts(&donor)?;
        check_counts(&acceptor)?;
        check_bin_width(bin_width_ms)?;
        Ok(Self {
            donor,
            acceptor,
            bin_width_ms,
        })
    }

    pub fn donor(&self) -> &[f64] {
        &self.donor
    }

    pub fn acceptor(&self) -> &[f64] {
        &self.acceptor
    }

    pub fn bin_width_ms(&self) -> f64 {
        self.bin_width_ms
    }

    /// Number of time bins.
    pub fn len(&self) -> usize {
        self.donor.len()
    }

    pub fn is_empty(&self) -> bool {
        self.donor.is_empty()
    }
}

/// Four channels per time bin for alternating laser excitation: the donor
/// and acceptor detection channels under donor excitation (`d_d`, `a_d`)
/// and under acceptor excitation (`d_a`, `a_a`).
#[derive(Debug, Clone, PartialEq)]
pub struct AlexTrace {
    d_d: Vec<f64>,
    d_a: Vec<f64>,
    a_d: Vec<f64>,
    a_a: Vec<f64>,
    bin_width_ms: f64,
}

impl AlexTrace {
    pub fn new(
        d_d: Vec<f64>,
        d_a: Vec<f64>,
        a_d: Vec<f64>,
        a_a: Vec<f64>,
        bin_width_ms: f64,
    ) -> Result<Self> {
        check_same_len(&d_d, &d_a)?;
        check_same_len(&d_d, &a_d)?;
        check_same_len(&d_d, &a_a)?;
        check_counts(&d_d)?;
        check_counts(&d_a)?;
        check_counts(&a_d)?;
        check_counts(&a_a)?;
        check_bin_width(bin_width_ms)?;
        Ok(Self {
            d_d,
            d_a,
            a_d,
            a_a,
            bin_width_ms,
        })
    }

    pub fn d_d(&self) -> &[f64] {
        &self.d_d
    }

    pub fn d_a(&self) -> &[f64] {
        &self.d_a
    }

    pub fn a_d(&self) -> &[f64] {
        &self.a_d
    }

    pub fn a_a(&self) -> &[f64] {
        &self.a_a
    }

    pub fn bin_width_ms(&self) -> f64 {
        self.bin_width_ms
    }

    pub fn len(&self) -> usize {
        self.d_d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d_d.is_empty()
    }
}

/// One selected fluorescent event from a two-channel trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Burst {
    /// Donor-channel photon count (post-correction values may be fractional).
    pub donor_counts: f64,
    /// Acceptor-channel photon count.
    pub acceptor_counts: f64,
    /// Index of the time bin this event came from.
    pub source_bin_index: usize,
}

/// One selected fluorescent event from a four-channel ALEX trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlexBurst {
    pub d_d_counts: f64,
    pub d_a_counts: f64,
    pub a_d_counts: f64,
    pub a_a_counts: f64,
    pub source_bin_index: usize,
}

fn check_increasing(indices: impl Iterator<Item = usize>) -> Result<()> {
    let mut prev: Option<usize> = None;
    for index in indices {
        if let Some(p) = prev {
            if index <= p {
                return Err(Error::UnorderedBursts { index });
            }
        }
        prev = Some(index);
    }
    Ok(())
}

/// Ordered set of selected events plus a record of the selection and
/// correction steps (with parameter values) that produced it.
#[derive(Debug, Clone, PartialEq)]
pub struct BurstSet {
    bursts: Vec<Burst>,
    provenance: Vec<String>,
}

impl BurstSet {
    /// Builds a burst set from externally selected events, e.g. the output
    /// of a third-party burst-search algorithm. Source bin indices must be
    /// strictly increasing.
    pub fn from_bursts(bursts: Vec<Burst>) -> Result<Self> {
        check_increasing(bursts.iter().map(|b| b.source_bin_index))?;
        Ok(Self {
            bursts,
            provenance: vec!["external burst input".to_string()],
        })
    }

    pub(crate) fn from_pipeline(bursts: Vec<Burst>, provenance: Vec<String>) -> Self {
        debug_assert!(check_increasing(bursts.iter().map(|b| b.source_bin_index)).is_ok());
        Self { bursts, provenance }
    }

    pub fn bursts(&self) -> &[Burst] {
        &self.bursts
    }

    pub fn len(&self) -> usize {
        self.bursts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bursts.is_empty()
    }

    /// Human-readable pipeline steps that produced this set, oldest first.
    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }
}

/// Ordered set of selected ALEX events; see [`BurstSet`].
#[derive(Debug, Clone, PartialEq)]
pub struct AlexBurstSet {
    bursts: Vec<AlexBurst>,
    provenance: Vec<String>,
}

impl AlexBurstSet {
    pub fn from_bursts(bursts: Vec<AlexBurst>) -> Result<Self> {
        check_increasing(bursts.iter().map(|b| b.source_bin_index))?;
        Ok(Self {
            bursts,
            provenance: vec!["external burst input".to_string()],
        })
    }

    pub(crate) fn from_pipeline(bursts: Vec<AlexBurst>, provenance: Vec<String>) -> Self {
        debug_assert!(check_increasing(bursts.iter().map(|b| b.source_bin_index)).is_ok());
        Self { bursts, provenance }
    }

    pub fn bursts(&self) -> &[AlexBurst] {
        &self.bursts
    }

    pub fn len(&self) -> usize {
        self.bursts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bursts.is_empty()
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }
}

/// Experimentally determined correction factors and selection thresholds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrectionParams {
    /// Mean background counts per bin, donor channel.
    pub auto_donor: f64,
    /// Mean background counts per bin, acceptor channel.
    pub auto_acceptor: f64,
    /// Crosstalk fraction: donor-driven counts appearing in the acceptor channel.
    pub cross_d_to_a: f64,
    /// Crosstalk fraction: acceptor-driven counts appearing in the donor channel.
    pub cross_a_to_d: f64,
    /// Detection-efficiency correction factor.
    pub gamma: f64,
    /// Photon-count threshold, donor channel.
    pub t_donor: f64,
    /// Photon-count threshold, acceptor channel.
    pub t_acceptor: f64,
}

impl CorrectionParams {
    pub fn validate(&self) -> Result<()> {
        for (name, value) in [
            ("auto_donor", self.auto_donor),
            ("auto_acceptor", self.auto_acceptor),
            ("t_donor", self.t_donor),
            ("t_acceptor", self.t_acceptor),
        ] {
            if !value.is_finite() || value < 0.0 {
                return Err(Error::NegativeParameter { name, value });
            }
        }
        for (name, value) in [
            ("cross_DtoA", self.cross_d_to_a),
            ("cross_AtoD", self.cross_a_to_d),
        ] {
            if !value.is_finite() || !(0.0..1.0).contains(&value) {
                return Err(Error::FractionOutOfRange { name, value });
            }
        }
        if !self.gamma.is_finite() || self.gamma <= 0.0 {
            return Err(Error::NonPositiveGamma(self.gamma));
        }
        Ok(())
    }
}

impl Default for CorrectionParams {
    fn default() -> Self {
        Self {
            auto_donor: 0.0,
            auto_acceptor: 0.0,
            cross_d_to_a: 0.0,
            cross_a_to_d: 0.0,
            gamma: 1.0,
            t_donor: 0.0,
            t_acceptor: 0.0,
        }
    }
}
