use super::config::{ExperimentConfig, RadiusKind, SchemeChoice};
use super::ResultRow;
use crate::error::Result;
use crate::geometry::{Deployment, Sampler, SpatialIndex, DEFAULT_LEAF_CAPACITY};
use crate::graph::{stream_components, stream_rgg_components, ComponentStats};
use crate::radii::CnPreset;
use crate::rng::{self, STREAM_MARKS};

/// One configuration of a component sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RowParams {
    pub scheme: SchemeChoice,
    pub radius_kind: RadiusKind,
    pub cn: CnPreset,
    pub n: usize,
    pub delta: f64,
    pub slots: usize,
    pub awake: usize,
}

impl RowParams {
    pub fn radius(&self) -> Result<f64> {
        self.radius_kind
            .radius(self.scheme, self.n, self.slots, self.awake, self.cn)
    }
}

/// Components of one fresh deployment with fresh schedules, seeded by `seed`.
pub fn component_trial(p: &RowParams, seed: u64) -> Result<ComponentStats> {
    let r = p.radius()?;
    let deployment = Deployment::sample(p.n, seed, Sampler::default())?;
    let idx = SpatialIndex::build(&deployment, DEFAULT_LEAF_CAPACITY)?;
    match p.scheme.spec(p.slots, p.awake)? {
        None => Ok(stream_rgg_components(&idx, r)),
        Some(spec) => {
            let schedules = spec.assign(deployment.len(), &mut rng::stream(seed, STREAM_MARKS));
            stream_components(&idx, r, &schedules)
        }
    }
}

fn run_row(
    experiment: &str,
    p: &RowParams,
    row: u64,
    cfg: &ExperimentConfig,
) -> Result<Vec<ResultRow>> {
    let trials: Vec<ComponentStats> = (0..cfg.repetitions as u64)
        .map(|t| component_trial(p, rng::trial_seed(cfg.seed, row, t)))
        .collect::<Result<_>>()?;
    let base = ResultRow {
        experiment: experiment.to_string(),
        scheme: p.scheme.label().to_string(),
        radius_kind: p.radius_kind.label().to_string(),
        cn: p.cn.to_string(),
        n: p.n,
        delta: p.delta,
        slots: p.slots,
        awake: p.awake,
        radius: p.radius()?,
        metric: String::new(),
        mean: 0.0,
        std: 0.0,
        values: Vec::new(),
    };
    let metric = |f: fn(&ComponentStats) -> f64| trials.iter().map(f).collect::<Vec<f64>>();
    Ok(vec![
        base.with_metric("largest_fraction", metric(|s| s.largest_fraction)),
        base.with_metric("isolated_count", metric(|s| s.isolated_count as f64)),
        base.with_metric("second_largest", metric(|s| s.second_largest_size as f64)),
        base.with_metric("component_count", metric(|s| s.component_count as f64)),
    ])
}

/// Component statistics for every `(n, δ)` of the config.
pub fn run_component_sweep(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let cn = cfg.cn_preset()?;
    let mut rows = Vec::new();
    let mut row = 0;
    for n in cfg.n_values() {
        for &delta in &cfg.delta {
            let (slots, awake) = cfg.shape(delta)?;
            let p = RowParams {
                scheme: cfg.scheme,
                radius_kind: cfg.radius,
                cn,
                n,
                delta,
                slots,
                awake,
            };
            rows.extend(run_row("sweep", &p, row, cfg)?);
            row += 1;
        }
    }
    Ok(rows)
}

/// Component statistics for every `c(n)` preset of `cn_list`, `n` and `δ`.
pub fn run_cn_sweep(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    cfg.validate()?;
    let mut rows = Vec::new();
    let mut row = 0;
    for cn in cfg.cn_presets()? {
        for n in cfg.n_values() {
            for &delta in &cfg.delta {
                let (slots, awake) = cfg.shape(delta)?;
                let p = RowParams {
                    scheme: cfg.scheme,
                    radius_kind: cfg.radius,
                    cn,
                    n,
                    delta,
                    slots,
                    awake,
                };
                rows.extend(run_row("cn-sweep", &p, row, cfg)?);
                row += 1;
            }
        }
    }
    Ok(rows)
}
