//! Deterministic, seeded synthetic-data generator with known ground truth.
//!
//! Each time bin receives Poisson background counts in every detection
//! channel. With probability `burst_rate` the bin also holds one fluorescent
//! event of `N >= 1` total photons, drawn from a shifted geometric
//! distribution with mean `burst_intensity_mean`. Burst photons are split
//! binomially between the channels with acceptor probability `true_e`.
//!
//! Detection asymmetry (gamma) is modelled as per-channel retention
//! probabilities: acceptor photons are kept with probability `min(1, gamma)`
//! and donor photons with `min(1, 1/gamma)`, so the retained-count ratio
//! matches an instrument whose efficiency ratio is gamma and
//! [`crate::analysis::fret_efficiency`] with the same gamma recovers
//! `true_e` in expectation.
//!
//! Crosstalk is simulated as a binomial photon *transfer* between the two
//! channels (computed simultaneously from the pre-transfer pair), while the
//! correction in [`crate::correct`] subtracts expected fractions; the small
//! mismatch is intentional and mirrors real instruments.
//!
//! The stream is generated by ChaCha8 seeded from `seed`; identical
//! parameters produce bit-identical traces within one build.

use std::fmt::Write as _;
use std::path::Path;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution, Geometric, Poisson};

use crate::error::{Error, Result};
use crate::model::{AlexTrace, FretTrace};

/// Generator settings; see the module docs for the photon model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimParams {
    pub n_bins: usize,
    /// Probability per bin of containing one fluorescent event.
    pub burst_rate: f64,
    /// Mean total photons per event (shifted geometric, so >= 1).
    pub burst_intensity_mean: f64,
    /// Acceptor fraction of each event's photons.
    pub true_e: f64,
    /// Poisson mean of donor-channel background per bin.
    pub background_d: f64,
    /// Poisson mean of acceptor-channel background per bin.
    pub background_a: f64,
    pub cross_d_to_a: f64,
    pub cross_a_to_d: f64,
    pub gamma: f64,
    pub seed: u64,
}

impl SimParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_bins == 0 {
            return Err(Error::InvalidSimParam {
                name: "n_bins",
                reason: "must be > 0".into(),
            });
        }
        if !(0.0..=1.0).contains(&self.burst_rate) {
            return Err(Error::InvalidSimParam {
                name: "burst_rate",
                reason: format!("must lie in [0, 1], got {}", self.burst_rate),
            });
        }
        if !self.burst_intensity_mean.is_finite() || self.burst_intensity_mean < 1.0 {
            return Err(Error::InvalidSimParam {
                name: "burst_intensity_mean",
                reason: format!(
                    "must be >= 1 (events carry at least one photon), got {}",
                    self.burst_intensity_mean
                ),
            });
        }
        if !(0.0..=1.0).contains(&self.true_e) {
            return Err(Error::InvalidSimParam {
                name: "true_E",
                reason: format!("must lie in [0, 1], got {}", self.true_e),
            });
        }
        for (name, v) in [
            ("background_d", self.background_d),
            ("background_a", self.background_a),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidSimParam {
                    name,
                    reason: format!("must be >= 0, got {v}"),
                });
            }
        }
        for (name, v) in [
            ("cross_DtoA", self.cross_d_to_a),
            ("cross_AtoD", self.cross_a_to_d),
        ] {
            if !v.is_finite() || !(0.0..1.0).contains(&v) {
                return Err(Error::InvalidSimParam {
                    name,
                    reason: format!("must lie in [0, 1), got {v}"),
                });
            }
        }
        if !self.gamma.is_finite() || self.gamma <= 0.0 {
            return Err(Error::InvalidSimParam {
                name: "gamma",
                reason: format!("must be > 0, got {}", self.gamma),
            });
        }
        Ok(())
    }
}

/// Per-bin ground truth for a simulated two-channel trace. `donor` and
/// `acceptor` are the detected burst photons before crosstalk mixing and
/// before background; `total_drawn` is the emitted event size, so with
/// gamma = 1 the split sums to it exactly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BinTruth {
    pub is_burst: bool,
    pub total_drawn: u64,
    pub donor: u64,
    pub acceptor: u64,
}

/// Per-bin ground truth for a simulated ALEX trace; donor-excitation
/// channels as in [`BinTruth`], plus the event's acceptor-excitation count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AlexBinTruth {
    pub is_burst: bool,
    pub total_drawn: u64,
    pub d_d: u64,
    pub a_d: u64,
    pub a_a: u64,
}

struct PhotonModel {
    burst_rate: f64,
    event_size: Geometric,
    acceptor_split: f64,
    keep_acceptor: f64,
    keep_donor: f64,
    cross_d_to_a: f64,
    cross_a_to_d: f64,
}

impl PhotonModel {
    fn new(p: &SimParams) -> Self {
        Self {
            burst_rate: p.burst_rate,
            // N = 1 + Geometric(1/mean) has mean burst_intensity_mean
            event_size: Geometric::new(1.0 / p.burst_intensity_mean).expect("validated mean >= 1"),
            acceptor_split: p.true_e,
            keep_acceptor: p.gamma.min(1.0),
            keep_donor: (1.0 / p.gamma).min(1.0),
            cross_d_to_a: p.cross_d_to_a,
            cross_a_to_d: p.cross_a_to_d,
        }
    }

    /// Draws one bin's event: (total emitted, detected donor, detected
    /// acceptor), all zero when no event occurs.
    fn draw_event(&self, rng: &mut ChaCha8Rng) -> (bool, u64, u64, u64) {
        if self.burst_rate <= 0.0 || !rng.random_bool(self.burst_rate) {
            return (false, 0, 0, 0);
        }
        let total = 1 + self.event_size.sample(rng);
        let acceptor_emitted = binomial(rng, total, self.acceptor_split);
        let donor_emitted = total - acceptor_emitted;
        let acceptor = binomial(rng, acceptor_emitted, self.keep_acceptor);
        let donor = binomial(rng, donor_emitted, self.keep_donor);
        (true, total, donor, acceptor)
    }

    /// Misroutes detected photons between the two channels, both directions
    /// computed from the same pre-transfer pair.
    fn mix_crosstalk(&self, rng: &mut ChaCha8Rng, donor: u64, acceptor: u64) -> (u64, u64) {
        let to_acceptor = binomial(rng, donor, self.cross_d_to_a);
        let to_donor = binomial(rng, acceptor, self.cross_a_to_d);
        (
            donor - to_acceptor + to_donor,
            acceptor - to_donor + to_acceptor,
        )
    }
}

fn binomial(rng: &mut ChaCha8Rng, n: u64, p: f64) -> u64 {
    if n == 0 || p <= 0.0 {
        return 0;
    }
    if p >= 1.0 {
        return n;
    }
    Binomial::new(n, p)
        .expect("p validated in [0, 1]")
        .sample(rng)
}

fn poisson(rng: &mut ChaCha8Rng, mean: f64) -> u64 {
    if mean <= 0.0 {
        return 0;
    }
    Poisson::new(mean).expect("mean validated > 0").sample(rng) as u64
}

/// Generates a two-channel trace plus per-bin ground truth.
pub fn simulate_fret_trace(p: &SimParams) -> Result<(FretTrace, Vec<BinTruth>)> {
    p.validate()?;
    let model = PhotonModel::new(p);
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);

    let mut donor_channel = Vec::with_capacity(p.n_bins);
    let mut acceptor_channel = Vec::with_capacity(p.n_bins);
    let mut truth = Vec::with_capacity(p.n_bins);

    for _ in 0..p.n_bins {
        let bg_d = poisson(&mut rng, p.background_d);
        let bg_a = poisson(&mut rng, p.background_a);
        let (is_burst, total, donor, acceptor) = model.draw_event(&mut rng);
        let (d_mixed, a_mixed) = model.mix_crosstalk(&mut rng, donor, acceptor);
        donor_channel.push((d_mixed + bg_d) as f64);
        acceptor_channel.push((a_mixed + bg_a) as f64);
        truth.push(BinTruth {
            is_burst,
            total_drawn: total,
            donor,
            acceptor,
        });
    }

    let trace = FretTrace::new(donor_channel, acceptor_channel, 1.0)?;
    Ok((trace, truth))
}

/// Generates a four-channel ALEX trace plus per-bin ground truth.
///
/// Donor-excitation photons follow the same model as the FRET simulator.
/// During a burst the acceptor-excitation channel `a_a` receives a Poisson
/// count with mean `acceptor_brightness` (zero models a donor-only
/// species); `d_a` carries donor-channel background only.
pub fn simulate_alex_trace(
    p: &SimParams,
    acceptor_brightness: f64,
) -> Result<(AlexTrace, Vec<AlexBinTruth>)> {
    p.validate()?;
    if !acceptor_brightness.is_finite() || acceptor_brightness < 0.0 {
        return Err(Error::InvalidSimParam {
            name: "acceptor_brightness",
            reason: format!("must be >= 0, got {acceptor_brightness}"),
        });
    }
    let model = PhotonModel::new(p);
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);

    let mut d_d = Vec::with_capacity(p.n_bins);
    let mut d_a = Vec::with_capacity(p.n_bins);
    let mut a_d = Vec::with_capacity(p.n_bins);
    let mut a_a = Vec::with_capacity(p.n_bins);
    let mut truth = Vec::with_capacity(p.n_bins);

    for _ in 0..p.n_bins {
        let bg_d_d = poisson(&mut rng, p.background_d);
        let bg_d_a = poisson(&mut rng, p.background_d);
        let bg_a_d = poisson(&mut rng, p.background_a);
        let bg_a_a = poisson(&mut rng, p.background_a);
        let (is_burst, total, donor, acceptor) = model.draw_event(&mut rng);
        let (dd_mixed, ad_mixed) = model.mix_crosstalk(&mut rng, donor, acceptor);
        let aa_burst = if is_burst {
            poisson(&mut rng, acceptor_brightness)
        } else {
            0
        };
        d_d.push((dd_mixed + bg_d_d) as f64);
        d_a.push(bg_d_a as f64);
        a_d.push((ad_mixed + bg_a_d) as f64);
        a_a.push((aa_burst + bg_a_a) as f64);
        truth.push(AlexBinTruth {
            is_burst,
            total_drawn: total,
            d_d: donor,
            a_d: acceptor,
            a_a: aa_burst,
        });
    }

    let trace = AlexTrace::new(d_d, d_a, a_d, a_a, 1.0)?;
    Ok((trace, truth))
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::WriteFailed {
        path: path.to_path_buf(),
        source,
    })
}

/// Writes the per-bin ground truth sidecar for a two-channel simulation.
pub fn write_fret_ground_truth_csv(truth: &[BinTruth], path: &Path) -> Result<()> {
    let mut out = String::from("bin_index,is_burst,total_drawn,donor_split,acceptor_split\n");
    for (i, t) in truth.iter().enumerate() {
        writeln!(
            out,
            "{i},{},{},{},{}",
            u8::from(t.is_burst),
            t.total_drawn,
            t.donor,
            t.acceptor
        )
        .expect("string write cannot fail");
    }
    write_file(path, &out)
}

/// Writes the per-bin ground truth sidecar for an ALEX simulation.
pub fn write_alex_ground_truth_csv(truth: &[AlexBinTruth], path: &Path) -> Result<()> {
    let mut out = String::from("bin_index,is_burst,total_drawn,d_d_split,a_d_split,a_a_burst\n");
    for (i, t) in truth.iter().enumerate() {
        writeln!(
            out,
            "{i},{},{},{},{},{}",
            u8::from(t.is_burst),
            t.total_drawn,
            t.d_d,
            t.a_d,
            t.a_a
        )
        .expect("string write cannot fail");
    }
    write_file(path, &out)
}
