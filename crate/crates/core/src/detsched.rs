//! Schedule families that connect at the plain random geometric graph radius.
//!
//! A family of `k` schedules in which every two options share an awake slot
//! and every slot is covered by some option makes any two in-range nodes
//! connect, whatever options they pick. Families are found by rejection
//! sampling: draw `k` uniform `d`-subsets and keep the first draw that passes.

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng;
use crate::schedules::{gen_random_selection, Schedule, SchemeSpec};

/// Row tag mixed into per-attempt seeds.
const SEARCH_ROW: u64 = 0x00de_7c4e;

/// Attempts evaluated per parallel block.
const BLOCK: u64 = 4096;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FamilyCheck {
    pub pairwise_overlap: bool,
    pub full_coverage: bool,
}

impl FamilyCheck {
    pub fn ok(&self) -> bool {
        self.pairwise_overlap && self.full_coverage
    }
}

/// Evaluates both family properties; schedules must share `L`.
pub fn check_family(schedules: &[Schedule]) -> Result<FamilyCheck> {
    let Some(first) = schedules.first() else {
        return Err(Error::invalid("family must not be empty"));
    };
    if schedules.iter().any(|s| s.slots() != first.slots()) {
        return Err(Error::invalid("family schedules must share L"));
    }
    let pairwise_overlap = schedules
        .iter()
        .enumerate()
        .all(|(i, a)| schedules[i + 1..].iter().all(|b| a.overlaps_unchecked(b)));
    let mut union = vec![0u64; first.words().len()];
    for s in schedules {
        for (u, w) in union.iter_mut().zip(s.words()) {
            *u |= w;
        }
    }
    let covered: u32 = union.iter().map(|w| w.count_ones()).sum();
    Ok(FamilyCheck {
        pairwise_overlap,
        full_coverage: covered as usize == first.slots(),
    })
}

/// A validated family: pairwise overlapping and covering every slot.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleFamily {
    schedules: Vec<Schedule>,
}

impl ScheduleFamily {
    pub fn new(schedules: Vec<Schedule>) -> Result<Self> {
        let c = check_family(&schedules)?;
        if !c.pairwise_overlap {
            return Err(Error::invalid("family options do not pairwise overlap"));
        }
        if !c.full_coverage {
            return Err(Error::invalid("family leaves a slot uncovered"));
        }
        Ok(ScheduleFamily { schedules })
    }

    pub fn k(&self) -> usize {
        self.schedules.len()
    }

    pub fn slots(&self) -> usize {
        self.schedules[0].slots()
    }

    pub fn schedules(&self) -> &[Schedule] {
        &self.schedules
    }

    /// Uniform choice among the options as a scheme.
    pub fn scheme(&self) -> SchemeSpec {
        SchemeSpec::family(self.schedules.clone()).expect("family is non-empty")
    }
}

/// Counts gathered over failed attempts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub attempts: u64,
    pub overlap_failures: u64,
    pub coverage_failures: u64,
    /// Attempts that failed both properties.
    pub both_failed: u64,
}

impl SearchStats {
    pub fn overlap_rate(&self) -> f64 {
        (self.attempts - self.overlap_failures) as f64 / self.attempts as f64
    }

    pub fn coverage_rate(&self) -> f64 {
        (self.attempts - self.coverage_failures) as f64 / self.attempts as f64
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchOutcome {
    /// `attempts` counts the successful draw.
    Found {
        family: ScheduleFamily,
        attempts: u64,
    },
    Exhausted(SearchStats),
}

/// Draws the family of attempt `attempt`: `k` independent uniform `d`-subsets.
pub fn sample_family(
    slots: usize,
    awake: usize,
    k: usize,
    seed: u64,
    attempt: u64,
) -> Result<Vec<Schedule>> {
    let mut r = rng::stream(rng::trial_seed(seed, SEARCH_ROW, attempt), rng::STREAM_AUX);
    (0..k)
        .map(|_| gen_random_selection(slots, awake, &mut r))
        .collect()
}

/// Rejection search over at most `max_attempts` draws.
///
/// Blocks of attempts run in parallel, each from its own seed, and the
/// lowest passing attempt index wins, so the outcome is independent of the
/// thread count.
pub fn search_family(
    slots: usize,
    awake: usize,
    k: usize,
    max_attempts: u64,
    seed: u64,
) -> Result<SearchOutcome> {
    if k < 1 {
        return Err(Error::invalid("k must be at least 1"));
    }
    if awake == 0 || awake > slots {
        return Err(Error::invalid(format!(
            "need 1 <= d <= L, got d={awake}, L={slots}"
        )));
    }
    let mut stats = SearchStats::default();
    let mut start = 0;
    while start < max_attempts {
        let end = (start + BLOCK).min(max_attempts);
        let checks: Vec<FamilyCheck> = (start..end)
            .into_par_iter()
            .map(|a| check_family(&sample_family(slots, awake, k, seed, a)?))
            .collect::<Result<_>>()?;
        if let Some(i) = checks.iter().position(FamilyCheck::ok) {
            let attempt = start + i as u64;
            let family = ScheduleFamily::new(sample_family(slots, awake, k, seed, attempt)?)?;
            return Ok(SearchOutcome::Found {
                family,
                attempts: attempt + 1,
            });
        }
        for c in &checks {
            stats.attempts += 1;
            stats.overlap_failures += u64::from(!c.pairwise_overlap);
            stats.coverage_failures += u64::from(!c.full_coverage);
            stats.both_failed += u64::from(!c.pairwise_overlap && !c.full_coverage);
        }
        start = end;
    }
    Ok(SearchOutcome::Exhausted(stats))
}

/// `⌈2 ln L⌉`.
pub fn default_k(slots: usize) -> usize {
    (2.0 * (slots as f64).ln()).ceil().max(1.0) as usize
}

/// Lower bound on the probability that `k` random options pairwise overlap:
/// `max(0, 1 - k(k+1)/2 · e^{-δd})`.
pub fn bound_overlap(k: usize, delta: f64, awake: usize) -> f64 {
    let k = k as f64;
    (1.0 - k * (k + 1.0) / 2.0 * (-delta * awake as f64).exp()).max(0.0)
}

/// Lower bound on the probability that `k` random options cover all `L`
/// slots: `max(0, 1 - L e^{-δk})`.
pub fn bound_coverage(slots: usize, delta: f64, k: usize) -> f64 {
    (1.0 - slots as f64 * (-delta * k as f64).exp()).max(0.0)
}

/// Gives every node one option of the family, uniformly.
pub fn assign_from_family<R: Rng + ?Sized>(
    family: &ScheduleFamily,
    nodes: usize,
    rng: &mut R,
) -> Vec<Schedule> {
    (0..nodes)
        .map(|_| family.schedules[rng.random_range(0..family.k())].clone())
        .collect()
}
