//! Pairwise and triple connection probabilities of the built-in schemes.

use rand::Rng;

use super::{check_shape, SchemeSpec, VbModel};
use crate::error::{Error, Result};
use crate::stats::Estimate;

/// Probability that two contiguous schedules share a slot, `min(1, (2d-1)/L)`.
///
/// Two windows of length `d` overlap iff their starts differ by less than
/// `d` around the cycle, which is `2d - 1` of the `L` possible offsets.
pub fn gamma_contiguous(awake: usize, slots: usize) -> Result<f64> {
    check_shape(slots, awake)?;
    Ok(((2 * awake - 1) as f64 / slots as f64).min(1.0))
}

/// Working value for random selection, `1 - (1 - d/L)^d`.
///
/// This is a lower bound on the true overlap probability (see
/// [`gamma_random_exact`]); the random-selection radius is defined from it.
pub fn gamma_random(awake: usize, slots: usize) -> Result<f64> {
    check_shape(slots, awake)?;
    let delta = awake as f64 / slots as f64;
    Ok((1.0 - (1.0 - delta).powi(awake as i32)).clamp(0.0, 1.0))
}

/// `1 - C(L-d, d) / C(L, d)`: exact overlap probability of two uniform `d`-subsets.
pub fn gamma_random_exact(awake: usize, slots: usize) -> Result<f64> {
    check_shape(slots, awake)?;
    Ok(1.0 - disjoint_probability(slots, awake))
}

/// Eschenauer–Gligor style key rings: `ring` keys drawn from a pool of `pool`;
/// two sensors share a key with probability `1 - C(P-K, K) / C(P, K)`.
pub fn gamma_key_predistribution(pool: usize, ring: usize) -> Result<f64> {
    if ring == 0 || ring > pool {
        return Err(Error::invalid(format!(
            "need 1 <= K <= P, got K={ring}, P={pool}"
        )));
    }
    Ok(1.0 - disjoint_probability(pool, ring))
}

// C(n-k, k) / C(n, k) as a running product
fn disjoint_probability(n: usize, k: usize) -> f64 {
    if 2 * k > n {
        return 0.0;
    }
    (0..k)
        .map(|i| (n - k - i) as f64 / (n - i) as f64)
        .product()
}

/// Probability that three contiguous schedules pairwise overlap, `(3d² - 3d + 1)/L²`.
///
/// Exact when `3d - 2 <= L`; for longer windows wrap-around creates extra
/// overlaps and the closed form undercounts, so that range is rejected.
pub fn triangle_prob_contiguous(awake: usize, slots: usize) -> Result<f64> {
    check_shape(slots, awake)?;
    if 3 * awake - 2 > slots {
        return Err(Error::invalid(format!(
            "closed form needs 3d - 2 <= L, got d={awake}, L={slots}"
        )));
    }
    let d = awake as f64;
    Ok((3.0 * d * d - 3.0 * d + 1.0) / (slots as f64 * slots as f64))
}

/// Fraction of independent mark pairs that connect.
pub fn gamma_empirical<M: VbModel, R: Rng + ?Sized>(
    model: &M,
    trials: u64,
    rng: &mut R,
) -> Result<Estimate> {
    if trials == 0 {
        return Err(Error::invalid("need at least one trial"));
    }
    let hits = (0..trials)
        .filter(|_| {
            let a = model.sample_mark(rng);
            let b = model.sample_mark(rng);
            model.connects(&a, &b)
        })
        .count() as u64;
    Ok(Estimate::from_counts(hits, trials))
}

impl SchemeSpec {
    /// Exact overlap probability where a closed form exists.
    pub fn gamma_exact(&self) -> f64 {
        match self {
            SchemeSpec::RandomSelection { slots, awake } => {
                gamma_random_exact(*awake, *slots).unwrap()
            }
            other => other.gamma(),
        }
    }
}
