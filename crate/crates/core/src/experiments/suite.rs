use std::fmt;

use super::config::{ExperimentConfig, RadiusKind, SchemeChoice};
use super::ResultRow;
use crate::error::{Error, Result};
use crate::geometry::{Deployment, Sampler, SpatialIndex, DEFAULT_LEAF_CAPACITY};
use crate::power::{task_power, PowerProfile, PowerReport};
use crate::radii::CnPreset;
use crate::rng::{self, STREAM_MARKS};
use crate::routing::{
    pick_destination, send_greedy, RouteConfig, RoutingTrace, TriggerRule, WakePattern,
};
use crate::schedules::Schedule;

/// The always-awake baseline and the four duty-cycled settings.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scenario {
    Rgg,
    DccWeak,
    DccOptimal,
    DcrWeak,
    DcrOptimal,
}

impl Scenario {
    pub const ALL: [Scenario; 5] = [
        Scenario::Rgg,
        Scenario::DccWeak,
        Scenario::DccOptimal,
        Scenario::DcrWeak,
        Scenario::DcrOptimal,
    ];

    pub fn scheme(&self) -> SchemeChoice {
        match self {
            Scenario::Rgg => SchemeChoice::Rgg,
            Scenario::DccWeak | Scenario::DccOptimal => SchemeChoice::Contiguous,
            Scenario::DcrWeak | Scenario::DcrOptimal => SchemeChoice::RandomSelection,
        }
    }

    pub fn radius_kind(&self) -> RadiusKind {
        match self {
            Scenario::Rgg => RadiusKind::Rgg,
            Scenario::DccWeak | Scenario::DcrWeak => RadiusKind::Weak,
            Scenario::DccOptimal | Scenario::DcrOptimal => RadiusKind::Optimal,
        }
    }

    /// Relaxed greedy from the start: the baseline and the random-selection
    /// scheme at its optimal radius, where strict greedy tends to stall.
    pub fn uses_relaxed(&self) -> bool {
        matches!(self, Scenario::Rgg | Scenario::DcrOptimal)
    }

    pub fn from_parts(scheme: SchemeChoice, kind: RadiusKind) -> Result<Self> {
        match (scheme, kind) {
            (SchemeChoice::Rgg, _) => Ok(Scenario::Rgg),
            (SchemeChoice::Contiguous, RadiusKind::Weak) => Ok(Scenario::DccWeak),
            (SchemeChoice::Contiguous, RadiusKind::Optimal) => Ok(Scenario::DccOptimal),
            (SchemeChoice::RandomSelection, RadiusKind::Weak) => Ok(Scenario::DcrWeak),
            (SchemeChoice::RandomSelection, RadiusKind::Optimal) => Ok(Scenario::DcrOptimal),
            (s, RadiusKind::Rgg) => Err(Error::Config(format!(
                "scheme {s} with the rgg radius is not one of the routing scenarios"
            ))),
        }
    }
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.scheme(), self.radius_kind())
    }
}

/// Parameters shared by the scenarios of one run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SuiteParams {
    pub n: usize,
    pub slots: usize,
    pub awake: usize,
    pub cn: CnPreset,
    pub relax: f64,
    pub target_distance: f64,
    pub target_angle: f64,
    pub max_cycles: u64,
}

impl SuiteParams {
    pub fn from_config(cfg: &ExperimentConfig, n: usize, delta: f64) -> Result<Self> {
        let (slots, awake) = cfg.shape(delta)?;
        Ok(SuiteParams {
            n,
            slots,
            awake,
            cn: cfg.cn_preset()?,
            relax: cfg.relax,
            target_distance: cfg.target_distance,
            target_angle: cfg.target_angle,
            max_cycles: cfg.max_cycles,
        })
    }
}

#[derive(Clone, Debug)]
pub struct ScenarioRun {
    pub scenario: Scenario,
    pub radius: f64,
    /// Rule of the reported trace.
    pub rule: TriggerRule,
    /// Strict greedy missed `D` and the run was repeated with relaxed greedy.
    pub fell_back: bool,
    pub trace: RoutingTrace,
    pub power: PowerReport,
}

/// Routes `M` from the origin to the node nearest the target point on the
/// given deployment. Schedules come from the marks stream of `seed`.
///
/// A strict greedy run that does not reach `D` is repeated with relaxed
/// greedy on the same network.
pub fn run_scenario(
    deployment: &Deployment,
    idx: &SpatialIndex,
    scenario: Scenario,
    p: &SuiteParams,
    seed: u64,
    profile: &PowerProfile,
) -> Result<ScenarioRun> {
    let radius = scenario
        .radius_kind()
        .radius(scenario.scheme(), p.n, p.slots, p.awake, p.cn)?;
    let rule = if scenario.uses_relaxed() {
        TriggerRule::from_factor(p.relax)?
    } else {
        TriggerRule::Strict
    };
    let schedules: Option<Vec<Schedule>> = scenario
        .scheme()
        .spec(p.slots, p.awake)?
        .map(|spec| spec.assign(deployment.len(), &mut rng::stream(seed, STREAM_MARKS)));
    let pattern = match &schedules {
        Some(s) => WakePattern::Scheduled(s),
        None => WakePattern::AlwaysAwake,
    };
    let mut cfg = RouteConfig {
        r: radius,
        source: 0,
        dest: pick_destination(deployment, p.target_distance, p.target_angle),
        rule,
        max_slots: p.max_cycles * p.slots as u64,
    };
    let mut trace = send_greedy(deployment, idx, pattern, &cfg)?;
    let fell_back = !trace.delivered && rule == TriggerRule::Strict && p.relax > 1.0;
    if fell_back {
        cfg.rule = TriggerRule::from_factor(p.relax)?;
        trace = send_greedy(deployment, idx, pattern, &cfg)?;
    }
    let power = task_power(&trace, radius, pattern, profile)?;
    Ok(ScenarioRun {
        scenario,
        radius,
        rule: cfg.rule,
        fell_back,
        trace,
        power,
    })
}

/// One routing run of the suite.
#[derive(Clone, Debug)]
pub struct RoutingRecord {
    pub n: usize,
    pub delta: f64,
    pub trial: u64,
    pub run: ScenarioRun,
}

/// Runs `scenarios` on shared deployments: `repetitions` per `(n, δ)`, trial
/// `t` of row `i` seeded by `trial_seed(seed, i, t)`.
pub fn run_routing_trials(
    cfg: &ExperimentConfig,
    scenarios: &[Scenario],
) -> Result<Vec<RoutingRecord>> {
    cfg.validate()?;
    let profile = PowerProfile::default();
    let mut out = Vec::new();
    let mut row = 0;
    for n in cfg.n_values() {
        for &delta in &cfg.delta {
            let p = SuiteParams::from_config(cfg, n, delta)?;
            for trial in 0..cfg.repetitions as u64 {
                let seed = rng::trial_seed(cfg.seed, row, trial);
                let deployment = Deployment::sample(n, seed, Sampler::default())?;
                let idx = SpatialIndex::build(&deployment, DEFAULT_LEAF_CAPACITY)?;
                for &s in scenarios {
                    let run = run_scenario(&deployment, &idx, s, &p, seed, &profile)?;
                    out.push(RoutingRecord {
                        n,
                        delta,
                        trial,
                        run,
                    });
                }
            }
            row += 1;
        }
    }
    Ok(out)
}

/// Every scenario on the same deployments, `repetitions` times per `(n, δ)`.
///
/// `delivered` is recorded for every run; the other metrics only for runs
/// that reached `D`.
pub fn run_routing_power_suite(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>> {
    let records = run_routing_trials(cfg, &Scenario::ALL)?;
    let cn = cfg.cn_preset()?;
    let mut rows = Vec::new();
    for n in cfg.n_values() {
        for &delta in &cfg.delta {
            let (slots, awake) = cfg.shape(delta)?;
            let runs: Vec<Vec<&ScenarioRun>> = Scenario::ALL
                .iter()
                .map(|s| {
                    records
                        .iter()
                        .filter(|r| r.n == n && r.delta == delta && r.run.scenario == *s)
                        .map(|r| &r.run)
                        .collect()
                })
                .collect();
            for (s, runs) in Scenario::ALL.iter().zip(&runs) {
                let base = ResultRow {
                    experiment: "route".into(),
                    scheme: s.scheme().label().into(),
                    radius_kind: s.radius_kind().label().into(),
                    cn: cn.to_string(),
                    n,
                    delta,
                    slots,
                    awake,
                    radius: runs[0].radius,
                    metric: String::new(),
                    mean: 0.0,
                    std: 0.0,
                    values: Vec::new(),
                };
                let ok: Vec<&ScenarioRun> =
                    runs.iter().copied().filter(|r| r.trace.delivered).collect();
                let metric =
                    |f: fn(&ScenarioRun) -> f64| ok.iter().map(|r| f(r)).collect::<Vec<f64>>();
                let flag = |f: fn(&ScenarioRun) -> bool| {
                    runs.iter().map(|r| f64::from(u8::from(f(r)))).collect()
                };
                rows.push(base.with_metric("delivered", flag(|r| r.trace.delivered)));
                rows.push(base.with_metric("relaxed_fallback", flag(|r| r.fell_back)));
                rows.push(base.with_metric("hops", metric(|r| r.trace.hop_count as f64)));
                rows.push(base.with_metric("slots", metric(|r| r.trace.completion_slot as f64)));
                rows.push(base.with_metric("n_prime", metric(|r| r.trace.n_prime() as f64)));
                rows.push(base.with_metric(
                    "total_tx_slots",
                    metric(|r| r.trace.total_tx_slots() as f64),
                ));
                rows.push(base.with_metric("tx_only", metric(|r| r.power.tx_only)));
                rows.push(base.with_metric("operational", metric(|r| r.power.operational)));
                rows.push(base.with_metric("total", metric(|r| r.power.total)));
            }
        }
    }
    Ok(rows)
}
