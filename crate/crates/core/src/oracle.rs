//! Brute-force and finite-difference validators for the closed forms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::channel::{private_rate_user1, private_rate_user2, ChannelParams, PowerSplit};
use crate::error::{GicError, Result};
use crate::mac::corner_rates;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OracleReport {
    pub best_value: f64,
    pub best_split: PowerSplit,
    /// `best_value - reference`; positive when the grid beat the reference.
    pub gap_vs_reference: f64,
    pub samples: u64,
    pub resolution: usize,
    pub seed: Option<u64>,
}

/// Exhaustive `resolution x resolution` search of the reduced LP over splits.
pub fn grid_oracle(params: &ChannelParams, mu: f64, resolution: usize, reference_value: f64) -> Result<OracleReport> {
    let best = crate::hk::hk_weighted_sum_over_splits(params, mu, resolution)?;
    Ok(OracleReport {
        best_value: best.best_value,
        best_split: best.best_split,
        gap_vs_reference: best.best_value - reference_value,
        samples: (resolution as u64) * (resolution as u64),
        resolution,
        seed: None,
    })
}

/// Estimate of user 1's stationary weight from exact (un-linearized) rate
/// changes when `delta` of user 1's power moves from private to public.
pub fn finite_difference_mu1(params: &ChannelParams, p1hat: f64, p2hat: f64, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(GicError::Validation { name: "delta", value: delta, reason: "must be positive" });
    }
    if !(p2hat > 0.0) {
        return Err(GicError::Domain(format!("p2hat must be positive, got {p2hat}")));
    }
    let (a, b) = (params.a(), params.b());
    let private_r1 = (delta / (p1hat + a * p2hat + 1.0)).ln_1p();
    let public_r1 = (b * delta / (b * p1hat + p2hat + 1.0)).ln_1p();
    let private_r2 = (b * delta / (b * p1hat + 1.0 + p2hat)).ln_1p() - (b * delta / (b * p1hat + 1.0)).ln_1p();
    Ok((public_r1 - private_r1) / private_r2)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderingReport {
    pub violations: u64,
    pub samples: u64,
    pub seed: u64,
    /// Violations per ordering, in [`crate::mac::MacCorners::orderings`] order.
    pub by_ordering: Vec<(String, u64)>,
}

/// Samples splits uniformly and counts broken corner orderings. Exact ties
/// (e.g. zero public power) are not violations.
pub fn ordering_scan(params: &ChannelParams, num_samples: u64, seed: u64) -> Result<OrderingReport> {
    if num_samples == 0 {
        return Err(GicError::Validation { name: "num_samples", value: 0.0, reason: "must be at least 1" });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let names = corner_rates(params, PowerSplit::new(0.0, 0.0)?).orderings().map(|o| o.0);
    let mut counts = [0u64; 8];
    for _ in 0..num_samples {
        let split = PowerSplit::new(rng.random(), rng.random())?;
        for (k, (_, hi, lo)) in corner_rates(params, split).orderings().into_iter().enumerate() {
            if hi < lo - 1e-15 * lo.abs().max(1.0) {
                counts[k] += 1;
            }
        }
    }
    Ok(OrderingReport {
        violations: counts.iter().sum(),
        samples: num_samples,
        seed,
        by_ordering: names.iter().zip(counts).map(|(n, c)| (n.to_string(), c)).collect(),
    })
}

/// Largest difference (over R1 and R2) between one composite step, where
/// both users move `delta` from private to public together, and the two
/// simple steps (user 1 first, then user 2) covering the same change.
pub fn composite_step_check(params: &ChannelParams, p1hat: f64, p2hat: f64, delta: f64) -> Result<f64> {
    if !(delta >= 0.0) {
        return Err(GicError::Validation { name: "delta", value: delta, reason: "must be non-negative" });
    }
    if delta == 0.0 {
        return Ok(0.0);
    }
    let (a, b) = (params.a(), params.b());
    let l = |snr: f64| crate::channel::half_log2_1p(snr);
    let v1 = |x: f64, y: f64| private_rate_user1(params, x, y);
    let v2 = |x: f64, y: f64| private_rate_user2(params, x, y);
    let (x0, y0) = (p1hat + delta, p2hat + delta);

    // Composite: both new public slices meet at the infinitesimal MAC point.
    let comp_r1 = l(b * delta / (b * p1hat + p2hat + 1.0)) + v1(p1hat, p2hat) - v1(x0, y0);
    let comp_r2 = l(a * delta / (a * p2hat + p1hat + 1.0)) + v2(p1hat, p2hat) - v2(x0, y0);

    // User 1 moves while user 2's private layer still holds P2hat + delta.
    let s1_r1 = l(b * delta / (b * p1hat + p2hat + delta + 1.0)) + v1(p1hat, y0) - v1(x0, y0);
    let s1_r2 = v2(p1hat, y0) - v2(x0, y0);
    // Then user 2 moves with user 1 already at P1hat.
    let s2_r1 = v1(p1hat, p2hat) - v1(p1hat, y0);
    let s2_r2 = l(a * delta / (a * p2hat + p1hat + 1.0)) + v2(p1hat, p2hat) - v2(p1hat, y0);

    Ok((comp_r1 - s1_r1 - s2_r1).abs().max((comp_r2 - s1_r2 - s2_r2).abs()))
}

/// Largest `|finite_difference_mu1 - mu1_closed|` over `n` random points
/// with `a, b` in `[0.05, 0.95]` and private powers in `[0.1, 100]`.
pub fn finite_difference_scan(n: usize, delta: f64, seed: u64) -> Result<f64> {
    let worst = (0..n)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(k as u64));
            let p = ChannelParams::new(rng.random_range(0.05..0.95), rng.random_range(0.05..0.95), 100.0, 100.0)?;
            let x = rng.random_range(0.1..100.0);
            let y = rng.random_range(0.1..100.0);
            let est = finite_difference_mu1(&p, x, y, delta)?;
            Ok((est - crate::boundary::mu1_closed(&p, x, y)).abs())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(worst.into_iter().fold(0.0, f64::max))
}
