//! Single-Gaussian histogram fitting by damped least squares.
//!
//! Minimizes `sum_k (count_k - a*exp(-(c_k - mu)^2 / (2 sigma^2)))^2` over
//! the bin centers `c_k` with a Levenberg-Marquardt iteration: analytic
//! Jacobian, normal equations damped multiplicatively on the diagonal, and
//! step acceptance by strict SSE decrease.

use crate::error::{Error, Result};

use super::histogram::EfficiencyHistogram;

const MAX_ITERATIONS: usize = 500;
const REL_TOL: f64 = 1e-8;
const LAMBDA_INIT: f64 = 1e-3;
const LAMBDA_UP: f64 = 10.0;
const LAMBDA_DOWN: f64 = 0.3;
const LAMBDA_MAX: f64 = 1e12;

/// Fitted Gaussian parameters plus fit diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianFit {
    pub amplitude: f64,
    pub mean: f64,
    /// Sign-normalized width, always > 0.
    pub sigma: f64,
    /// Sum of squared residuals at the returned parameters.
    pub residual_sse: f64,
    pub iterations: usize,
    /// False when the iteration cap was exhausted or the width collapsed;
    /// the parameters are still the best ones seen.
    pub converged: bool,
}

impl GaussianFit {
    /// Value of the fitted curve at `x`.
    pub fn evaluate(&self, x: f64) -> f64 {
        gaussian_value(self.amplitude, self.mean, self.sigma, x)
    }
}

/// `a * exp(-(x - mu)^2 / (2 sigma^2))`.
pub fn gaussian_value(amplitude: f64, mean: f64, sigma: f64, x: f64) -> f64 {
    let z = (x - mean) / sigma;
    amplitude * (-0.5 * z * z).exp()
}

/// Partial derivatives of [`gaussian_value`] with respect to
/// `(amplitude, mean, sigma)`, evaluated at `x`.
pub fn gaussian_gradient(amplitude: f64, mean: f64, sigma: f64, x: f64) -> [f64; 3] {
    let d = x - mean;
    let z = d / sigma;
    let e = (-0.5 * z * z).exp();
    [
        e,
        amplitude * e * d / (sigma * sigma),
        amplitude * e * d * d / (sigma * sigma * sigma),
    ]
}

fn sse(centers: &[f64], counts: &[f64], a: f64, mu: f64, sigma: f64) -> f64 {
    centers
        .iter()
        .zip(counts)
        .map(|(&x, &y)| {
            let r = y - gaussian_value(a, mu, sigma, x);
            r * r
        })
        .sum()
}

/// Solves a symmetric 3x3 system by Gaussian elimination with partial
/// pivoting. Returns `None` for a numerically singular matrix.
fn solve3(mut m: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    for col in 0..3 {
        let pivot = (col..3)
            .max_by(|&i, &j| m[i][col].abs().total_cmp(&m[j][col].abs()))
            .unwrap();
        if m[pivot][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            let pivot_row = m[col];
            for (k, entry) in m[row].iter_mut().enumerate().skip(col) {
                *entry -= f * pivot_row[k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for i in (0..3).rev() {
        let mut s = b[i];
        for k in i + 1..3 {
            s -= m[i][k] * x[k];
        }
        x[i] = s / m[i][i];
    }
    Some(x)
}

/// Fits a single Gaussian to the histogram counts.
///
/// Requires at least 3 nonzero bins and at least 10 in-range values;
/// anything less is [`Error::DegenerateData`]. Exhausting the iteration cap
/// is not an error: the fit comes back with `converged = false`.
pub fn fit_gaussian(hist: &EfficiencyHistogram) -> Result<GaussianFit> {
    if hist.n_in_range() < 10 {
        return Err(Error::DegenerateData {
            reason: format!("{} values in range, need at least 10", hist.n_in_range()),
        });
    }
    let centers: Vec<f64> = hist.centers().collect();
    let counts: Vec<f64> = hist.counts().iter().map(|&c| c as f64).collect();
    fit_gaussian_curve(&centers, &counts, hist.bin_width() / 10.0)
}

/// Fits a single Gaussian to arbitrary sampled curve data.
///
/// `sigma_floor` is the width below which the peak is considered collapsed
/// (a tenth of a bin width for histogram data); the fit stops there with
/// `converged = false`.
///
/// The iteration starts from moment estimates (modal sample position for
/// the mean, value-weighted standard deviation of positions for sigma,
/// maximum value for the amplitude) and once more from a tight width at the
/// modal sample; the lower-SSE result wins. The second start matters on
/// multi-modal data, where the wide moment estimate can strand the
/// iteration between peaks.
pub fn fit_gaussian_curve(
    centers: &[f64],
    counts: &[f64],
    sigma_floor: f64,
) -> Result<GaussianFit> {
    let nonzero = counts.iter().filter(|&&c| c > 0.0).count();
    if centers.len() != counts.len() || nonzero < 3 {
        return Err(Error::DegenerateData {
            reason: format!("{nonzero} nonzero bins, need at least 3"),
        });
    }
    let spacing = if centers.len() > 1 {
        (centers[centers.len() - 1] - centers[0]).abs() / (centers.len() - 1) as f64
    } else {
        sigma_floor
    };

    let (modal_bin, &max_count) = counts
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap();
    let total: f64 = counts.iter().sum();
    let mean0: f64 = centers.iter().zip(counts).map(|(x, c)| x * c).sum::<f64>() / total;
    let var0: f64 = centers
        .iter()
        .zip(counts)
        .map(|(x, c)| c * (x - mean0) * (x - mean0))
        .sum::<f64>()
        / total;

    let moment_start = (max_count, centers[modal_bin], var0.sqrt().max(spacing));
    let tight_start = (
        max_count,
        centers[modal_bin],
        (2.0 * spacing).max(sigma_floor),
    );

    let first = levenberg_marquardt(centers, counts, moment_start, sigma_floor);
    let second = levenberg_marquardt(centers, counts, tight_start, sigma_floor);
    Ok(if second.residual_sse < first.residual_sse {
        second
    } else {
        first
    })
}

fn levenberg_marquardt(
    centers: &[f64],
    counts: &[f64],
    start: (f64, f64, f64),
    sigma_floor: f64,
) -> GaussianFit {
    // box constraints keep the iteration on the data: a mean outside the
    // sampled support or a width beyond the full span cannot describe a peak
    let c_min = centers.iter().copied().fold(f64::INFINITY, f64::min);
    let c_max = centers.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let sigma_cap = (c_max - c_min).max(sigma_floor.max(f64::MIN_POSITIVE));
    let (mut a, mut mu, mut sigma) = start;

    let mut lambda = LAMBDA_INIT;
    let mut current_sse = sse(centers, counts, a, mu, sigma);
    let mut converged = false;
    let mut iterations = 0;

    for iter in 1..=MAX_ITERATIONS {
        iterations = iter;

        // Normal equations J^T J delta = J^T r with r = y - model.
        let mut jtj = [[0.0f64; 3]; 3];
        let mut jtr = [0.0f64; 3];
        for (&x, &y) in centers.iter().zip(counts) {
            let g = gaussian_gradient(a, mu, sigma, x);
            let r = y - gaussian_value(a, mu, sigma, x);
            for i in 0..3 {
                for j in 0..3 {
                    jtj[i][j] += g[i] * g[j];
                }
                jtr[i] += g[i] * r;
            }
        }

        let mut damped = jtj;
        for (i, row) in damped.iter_mut().enumerate() {
            row[i] *= 1.0 + lambda;
        }
        let Some(delta) = solve3(damped, jtr) else {
            lambda *= LAMBDA_UP;
            if lambda > LAMBDA_MAX {
                break;
            }
            continue;
        };

        let a_new = (a + delta[0]).max(0.0);
        let mu_new = (mu + delta[1]).clamp(c_min, c_max);
        let sigma_new = (sigma + delta[2]).abs().min(sigma_cap);
        let new_sse = sse(centers, counts, a_new, mu_new, sigma_new);

        if new_sse.is_finite() && new_sse < current_sse {
            let rel_change = [
                (a_new - a).abs() / (a.abs() + 1e-12),
                (mu_new - mu).abs() / (mu.abs() + 1e-12),
                (sigma_new - sigma).abs() / (sigma.abs() + 1e-12),
            ]
            .into_iter()
            .fold(0.0f64, f64::max);
            a = a_new;
            mu = mu_new;
            sigma = sigma_new;
            current_sse = new_sse;
            lambda = (lambda * LAMBDA_DOWN).max(1e-12);
            if sigma < sigma_floor {
                // Width collapsed below a tenth of a bin: no meaningful peak.
                sigma = sigma_floor;
                current_sse = sse(centers, counts, a, mu, sigma);
                converged = false;
                break;
            }
            if rel_change < REL_TOL {
                converged = true;
                break;
            }
        } else {
            lambda *= LAMBDA_UP;
            if lambda > LAMBDA_MAX {
                // Damping saturated: no further progress possible.
                break;
            }
        }
    }

    GaussianFit {
        amplitude: a,
        mean: mu,
        sigma: sigma.abs(),
        residual_sse: current_sse,
        iterations,
        converged,
    }
}
