use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{Deployment, Sampler, SpatialIndex, DEFAULT_LEAF_CAPACITY};
use crate::rng::{self, STREAM_MARKS};
use crate::schedules::VbModel;
use crate::stats;

/// Nodes with no neighbour: nobody within `r` whose mark connects.
pub fn count_isolated<T, F>(idx: &SpatialIndex, r: f64, marks: &[T], connects: F) -> usize
where
    T: Sync,
    F: Fn(&T, &T) -> bool + Sync,
{
    (0..idx.len())
        .into_par_iter()
        .filter(|&u| {
            !idx.any_within(idx.point(u), r, |v| {
                v != u && connects(&marks[u], &marks[v])
            })
        })
        .count()
}

#[derive(Clone, Copy, Debug, Default)]
pub struct IsolatedOptions {
    pub sampler: Sampler,
    /// Keep the first trial's deployment and redraw only marks.
    pub reuse_deployment: bool,
    /// Row index mixed into the per-trial seeds.
    pub row: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsolatedTrials {
    pub counts: Vec<usize>,
    pub mean: f64,
    /// Sample variance of the counts.
    pub variance: f64,
}

/// Isolated-node counts over independent trials, run in parallel.
///
/// Trial `t` uses seed `trial_seed(seed, row, t)` for its deployment and the
/// marks stream of that seed for the node marks, so results do not depend on
/// the thread count.
pub fn isolated_node_trial<M: VbModel>(
    n: usize,
    r: f64,
    model: &M,
    trials: usize,
    seed: u64,
    opts: IsolatedOptions,
) -> Result<IsolatedTrials> {
    if trials == 0 {
        return Err(Error::invalid("need at least one trial"));
    }
    if !(r >= 0.0) {
        return Err(Error::invalid(format!(
            "radius must be nonnegative, got {r}"
        )));
    }
    opts.sampler.validate()?;
    let shared = if opts.reuse_deployment {
        let d = Deployment::sample(n, rng::trial_seed(seed, opts.row, 0), opts.sampler)?;
        Some(SpatialIndex::build(&d, DEFAULT_LEAF_CAPACITY)?)
    } else {
        None
    };
    let counts = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let ts = rng::trial_seed(seed, opts.row, t);
            let owned;
            let idx = match &shared {
                Some(idx) => idx,
                None => {
                    let d = Deployment::sample(n, ts, opts.sampler)?;
                    owned = SpatialIndex::build(&d, DEFAULT_LEAF_CAPACITY)?;
                    &owned
                }
            };
            let mut mark_rng = rng::stream(ts, STREAM_MARKS);
            let marks: Vec<M::Mark> = (0..idx.len())
                .map(|_| model.sample_mark(&mut mark_rng))
                .collect();
            Ok(count_isolated(idx, r, &marks, |a, b| model.connects(a, b)))
        })
        .collect::<Result<Vec<usize>>>()?;
    let values: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
    Ok(IsolatedTrials {
        mean: stats::mean(&values),
        variance: stats::sample_variance(&values),
        counts,
    })
}
