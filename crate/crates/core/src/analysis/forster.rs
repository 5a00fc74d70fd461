//! Förster-distance fitting: one-parameter damped least squares of
//! `E(r) = 1 / (1 + (r/R0)^6)` to measured (separation, efficiency) pairs.

use crate::error::{Error, Result};

use super::forster_efficiency;

const MAX_ITERATIONS: usize = 200;
const REL_TOL: f64 = 1e-12;
const LAMBDA_UP: f64 = 10.0;
const LAMBDA_DOWN: f64 = 0.3;
const LAMBDA_MAX: f64 = 1e12;

/// Result of fitting the Förster curve. `r0` carries the same length units
/// as the input separations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForsterFit {
    pub r0: f64,
    pub residual_sse: f64,
    pub converged: bool,
}

impl ForsterFit {
    /// Fitted efficiency at separation `r`.
    pub fn evaluate(&self, r: f64) -> Result<f64> {
        forster_efficiency(r, self.r0)
    }
}

fn sse(points: &[(f64, f64)], r0: f64) -> f64 {
    points
        .iter()
        .map(|&(r, e)| {
            let d = e - 1.0 / (1.0 + (r / r0).powi(6));
            d * d
        })
        .sum()
}

/// dE/dR0 at one point: `6 q / (R0 (1 + q)^2)` with `q = (r/R0)^6`.
fn derivative(r: f64, r0: f64) -> f64 {
    let q = (r / r0).powi(6);
    let denom = 1.0 + q;
    6.0 * q / (r0 * denom * denom)
}

fn initial_r0(points: &[(f64, f64)]) -> f64 {
    // Start from the separation whose efficiency is nearest the midpoint,
    // where E(r) = 0.5 implies r = R0; fall back to the geometric mean of
    // all separations when no point is informative.
    points
        .iter()
        .filter(|&&(_, e)| (0.2..0.8).contains(&e))
        .min_by(|a, b| (a.1 - 0.5).abs().total_cmp(&(b.1 - 0.5).abs()))
        .map(|&(r, _)| r)
        .unwrap_or_else(|| {
            let log_mean = points.iter().map(|&(r, _)| r.ln()).sum::<f64>() / points.len() as f64;
            log_mean.exp()
        })
}

/// Fits the Förster distance to `(r, E)` pairs.
///
/// All separations must be positive and all efficiencies strictly inside
/// (0, 1); values at the boundary cannot be inverted through the model.
pub fn fit_forster_curve(points: &[(f64, f64)]) -> Result<ForsterFit> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    for (index, &(r, e)) in points.iter().enumerate() {
        if !r.is_finite() || r <= 0.0 {
            return Err(Error::NonPositiveDistance {
                name: "r",
                value: r,
            });
        }
        if !e.is_finite() || e <= 0.0 || e >= 1.0 {
            return Err(Error::OutOfDomainPoint { index, value: e });
        }
    }

    let mut r0 = initial_r0(points);
    let mut current_sse = sse(points, r0);
    let mut lambda = 1e-3;
    let mut converged = false;

    for _ in 0..MAX_ITERATIONS {
        if current_sse == 0.0 {
            converged = true;
            break;
        }
        let mut jtj = 0.0;
        let mut jtr = 0.0;
        for &(r, e) in points {
            let j = derivative(r, r0);
            let residual = e - 1.0 / (1.0 + (r / r0).powi(6));
            jtj += j * j;
            jtr += j * residual;
        }
        if jtj == 0.0 {
            break;
        }
        let delta = jtr / (jtj * (1.0 + lambda));
        let r0_new = r0 + delta;
        let improved = r0_new > 0.0 && {
            let new_sse = sse(points, r0_new);
            if new_sse < current_sse {
                r0 = r0_new;
                current_sse = new_sse;
                true
            } else {
                false
            }
        };
        if improved {
            lambda = (lambda * LAMBDA_DOWN).max(1e-12);
            if delta.abs() <= REL_TOL * r0 {
                converged = true;
                break;
            }
        } else {
            if delta.abs() <= REL_TOL * r0 {
                // Step has shrunk to numerical noise around the optimum.
                converged = true;
                break;
            }
            lambda *= LAMBDA_UP;
            if lambda > LAMBDA_MAX {
                break;
            }
        }
    }

    Ok(ForsterFit {
        r0,
        residual_sse: current_sse,
        converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, Normal};

    /// Forward-evaluation oracle at representative dye separations.
    fn noiseless_points(r0: f64) -> Vec<(f64, f64)> {
        [4.0, 6.0, 8.0, 10.0, 12.0]
            .iter()
            .map(|&r| (r, forster_efficiency(r, r0).unwrap()))
            .collect()
    }

    #[test]
    fn single_midpoint_is_exact() {
        let fit = fit_forster_curve(&[(5.0, 0.5)]).unwrap();
        assert_eq!(fit.r0, 5.0);
        assert!(fit.converged);
    }

    #[test]
    fn recovers_noiseless_r0() {
        let fit = fit_forster_curve(&noiseless_points(5.0)).unwrap();
        assert!(fit.converged);
        assert!((fit.r0 - 5.0).abs() < 1e-6, "r0 {}", fit.r0);
    }

    #[test]
    fn recovers_noisy_r0_within_five_percent() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let noise = Normal::new(0.0, 0.01).unwrap();
        for _ in 0..10 {
            let points: Vec<(f64, f64)> = noiseless_points(5.0)
                .into_iter()
                .map(|(r, e)| {
                    // resample until the noisy value stays invertible
                    let mut v = e + noise.sample(&mut rng);
                    while v <= 0.0 || v >= 1.0 {
                        v = e + noise.sample(&mut rng);
                    }
                    (r, v)
                })
                .collect();
            let fit = fit_forster_curve(&points).unwrap();
            assert!((fit.r0 - 5.0).abs() / 5.0 < 0.05, "r0 {}", fit.r0);
        }
    }

    #[test]
    fn geometric_mean_fallback_still_converges() {
        // every efficiency outside (0.2, 0.8)
        let points: Vec<(f64, f64)> = [9.0, 10.0, 12.0]
            .iter()
            .map(|&r| (r, forster_efficiency(r, 5.0).unwrap()))
            .collect();
        assert!(points.iter().all(|&(_, e)| !(0.2..0.8).contains(&e)));
        let fit = fit_forster_curve(&points).unwrap();
        assert!((fit.r0 - 5.0).abs() < 1e-6, "r0 {}", fit.r0);
    }

    #[test]
    fn scale_equivariance() {
        let base = fit_forster_curve(&noiseless_points(5.0)).unwrap();
        for scale in [0.1, 3.0, 250.0] {
            let scaled: Vec<(f64, f64)> = noiseless_points(5.0)
                .into_iter()
                .map(|(r, e)| (r * scale, e))
                .collect();
            let fit = fit_forster_curve(&scaled).unwrap();
            assert!(
                (fit.r0 - base.r0 * scale).abs() <= 1e-9 * base.r0 * scale,
                "scale {scale}: {} vs {}",
                fit.r0,
                base.r0 * scale
            );
        }
    }

    #[test]
    fn rejects_empty_and_out_of_domain() {
        assert!(matches!(
            fit_forster_curve(&[]).unwrap_err(),
            Error::EmptyInput
        ));
        assert!(matches!(
            fit_forster_curve(&[(5.0, 1.0)]).unwrap_err(),
            Error::OutOfDomainPoint { index: 0, .. }
        ));
        assert!(matches!(
            fit_forster_curve(&[(5.0, 0.5), (6.0, 0.0)]).unwrap_err(),
            Error::OutOfDomainPoint { index: 1, .. }
        ));
        assert!(matches!(
            fit_forster_curve(&[(0.0, 0.5)]).unwrap_err(),
            Error::NonPositiveDistance { .. }
        ));
    }
}
