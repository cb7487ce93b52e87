//! Reachability between schedules and per-slot time coverage.

use std::collections::{BTreeSet, VecDeque};

use rand::Rng;

use super::{Schedule, SchemeSpec};
use crate::error::{Error, Result};

/// Largest support enumerated exactly; bigger ones are sampled.
///
/// Reachability is checked with a BFS from every schedule, which is quadratic
/// in the support size.
pub const EXACT_SUPPORT_LIMIT: usize = 4096;

/// Distinct schedules a scheme can produce, linked when they overlap.
#[derive(Clone, Debug)]
pub struct SupportGraph {
    nodes: Vec<Schedule>,
    adjacency: Vec<Vec<usize>>,
    exact: bool,
}

impl SupportGraph {
    /// Graph over the distinct schedules in `schedules`.
    pub fn new(schedules: impl IntoIterator<Item = Schedule>) -> Result<Self> {
        Self::build(
            schedules
                .into_iter()
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect(),
            true,
        )
    }

    fn build(nodes: Vec<Schedule>, exact: bool) -> Result<Self> {
        let first = nodes
            .first()
            .ok_or_else(|| Error::invalid("support must not be empty"))?;
        if nodes.iter().any(|s| s.slots() != first.slots()) {
            return Err(Error::invalid("support schedules must share L"));
        }
        let mut adjacency = vec![Vec::new(); nodes.len()];
        for i in 0..nodes.len() {
            for j in i + 1..nodes.len() {
                if nodes[i].overlaps_unchecked(&nodes[j]) {
                    adjacency[i].push(j);
                    adjacency[j].push(i);
                }
            }
        }
        Ok(SupportGraph {
            nodes,
            adjacency,
            exact,
        })
    }

    /// Support of `scheme`: enumerated when it has at most
    /// [`EXACT_SUPPORT_LIMIT`] members, otherwise the distinct schedules seen
    /// in `draws` samples.
    pub fn of_scheme<R: Rng + ?Sized>(
        scheme: &SchemeSpec,
        draws: usize,
        rng: &mut R,
    ) -> Result<Self> {
        match scheme {
            SchemeSpec::Contiguous { slots, awake } => Self::new(
                (0..*slots).map(|start| Schedule::contiguous_from(*slots, *awake, start).unwrap()),
            ),
            SchemeSpec::RandomSelection { slots, awake } => {
                if binomial_at_most(*slots, *awake, EXACT_SUPPORT_LIMIT) {
                    Self::new(subsets(*slots, *awake))
                } else {
                    let seen: BTreeSet<Schedule> =
                        (0..draws.max(1)).map(|_| scheme.sample(rng)).collect();
                    Self::build(seen.into_iter().collect(), false)
                }
            }
            SchemeSpec::DeterministicFamily { options } => Self::new(options.iter().cloned()),
            SchemeSpec::Custom { options, weights } => Self::new(
                options
                    .iter()
                    .zip(weights)
                    .filter(|(_, w)| **w > 0.0)
                    .map(|(s, _)| s.clone()),
            ),
        }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn nodes(&self) -> &[Schedule] {
        &self.nodes
    }

    pub fn neighbors(&self, i: usize) -> &[usize] {
        &self.adjacency[i]
    }
}

fn binomial_at_most(n: usize, k: usize, limit: usize) -> bool {
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c * (n - i) as u128 / (i + 1) as u128;
        if c > limit as u128 {
            return false;
        }
    }
    true
}

fn subsets(n: usize, k: usize) -> Vec<Schedule> {
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(Schedule::from_slots(n, &idx).unwrap());
        // advance to the next combination in lexicographic order
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return out;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Reachability {
    pub reachable: bool,
    /// Longest shortest overlap chain between two schedules, when reachable.
    pub k: Option<usize>,
}

/// Whether every pair of schedules is linked by a chain of at most `max_k`
/// overlapping schedules, and the longest such chain.
pub fn check_reachability(support: &SupportGraph, max_k: usize) -> Reachability {
    let n = support.len();
    let mut diameter = 0;
    let mut dist = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for source in 0..n {
        dist.iter_mut().for_each(|d| *d = usize::MAX);
        dist[source] = 0;
        queue.clear();
        queue.push_back(source);
        let mut reached = 1;
        while let Some(u) = queue.pop_front() {
            if dist[u] == max_k {
                continue;
            }
            for &v in support.neighbors(u) {
                if dist[v] == usize::MAX {
                    dist[v] = dist[u] + 1;
                    diameter = diameter.max(dist[v]);
                    reached += 1;
                    queue.push_back(v);
                }
            }
        }
        if reached < n {
            return Reachability {
                reachable: false,
                k: None,
            };
        }
    }
    Reachability {
        reachable: true,
        k: Some(diameter),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoverageReport {
    /// Empirical `δ_k` per slot.
    pub frequencies: Vec<f64>,
    pub trials: u64,
    /// Slots never seen awake.
    pub uncovered: Vec<usize>,
}

impl CoverageReport {
    pub fn covers_every_slot(&self) -> bool {
        self.uncovered.is_empty()
    }

    pub fn delta_min(&self) -> f64 {
        self.frequencies
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }
}

/// Per-slot wake frequencies over `trials` independent draws.
pub fn check_time_coverage<R: Rng + ?Sized>(
    scheme: &SchemeSpec,
    trials: u64,
    rng: &mut R,
) -> Result<CoverageReport> {
    if trials == 0 {
        return Err(Error::invalid("need at least one trial"));
    }
    let mut counts = vec![0u64; scheme.slots()];
    for _ in 0..trials {
        for k in scheme.sample(rng).awake_slots() {
            counts[k] += 1;
        }
    }
    Ok(CoverageReport {
        uncovered: (0..counts.len()).filter(|&k| counts[k] == 0).collect(),
        frequencies: counts.iter().map(|&c| c as f64 / trials as f64).collect(),
        trials,
    })
}
