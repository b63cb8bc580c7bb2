//! Probe-budget estimates and reproducible sampling of count distributions.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use statrs::function::erf::erf_inv;

use crate::error::CliError;

/// Tolerance on the total probability of a distribution handed to [`sample_counts`].
pub const DISTRIBUTION_TOLERANCE: f64 = 1e-9;

/// Two-sided critical value `z*_{alpha/2} = sqrt(2) erfinv(1 - alpha)`.
pub fn critical_value(alpha: f64) -> f64 {
    std::f64::consts::SQRT_2 * erf_inv(1.0 - alpha)
}

/// Smallest probe count resolving a probability gap `delta_p` at confidence `1 - alpha` with visibility `q`.
///
/// Returns `ceil((z* / (q delta_p))^2)`, clamped to at least one probe.
pub fn estimate_sample_size(alpha: f64, delta_p: f64, q: f64) -> Result<u64, CliError> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(CliError::Config(format!("alpha = {alpha} must lie in (0, 1)")));
    }
    if !(delta_p > 0.0 && delta_p.is_finite()) {
        return Err(CliError::Config(format!("delta_p = {delta_p} must be positive")));
    }
    if !(q > 0.0 && q <= 1.0) {
        return Err(CliError::Config(format!("q = {q} must lie in (0, 1]")));
    }
    let ratio = critical_value(alpha) / (q * delta_p);
    Ok((ratio * ratio).ceil().max(1.0) as u64)
}

/// Histogram of `trials` draws from `distribution` (indexed by count) by inverse-CDF sampling.
///
/// Draws come from a ChaCha20 stream seeded with `seed`, so equal inputs give equal histograms.
pub fn sample_counts(distribution: &[f64], trials: u64, seed: u64) -> Result<Vec<u64>, CliError> {
    if distribution.is_empty() {
        return Err(CliError::InvalidDistribution("empty distribution".into()));
    }
    if let Some((n, p)) = distribution.iter().enumerate().find(|(_, p)| p.is_nan() || **p < -DISTRIBUTION_TOLERANCE) {
        return Err(CliError::InvalidDistribution(format!("probability {p} at n = {n}")));
    }
    let total: f64 = distribution.iter().sum();
    if (total - 1.0).abs() > DISTRIBUTION_TOLERANCE {
        return Err(CliError::InvalidDistribution(format!("probabilities sum to {total}")));
    }
    let cdf: Vec<f64> = distribution
        .iter()
        .scan(0.0, |acc, p| {
            *acc += p.max(0.0);
            Some(*acc)
        })
        .collect();
    let last = cdf.iter().rposition(|_| true).expect("nonempty");
    let top = distribution.iter().rposition(|p| *p > 0.0).unwrap_or(last);
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; distribution.len()];
    for _ in 0..trials {
        let u: f64 = rng.gen::<f64>() * cdf[last];
        let n = cdf.partition_point(|&c| c <= u).min(top);
        counts[n] += 1;
    }
    Ok(counts)
}
