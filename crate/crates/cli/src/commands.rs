use std::io::Write;

use dcwsn::detsched::{check_family, default_k, search_family, SearchOutcome};
use dcwsn::experiments::{
    reproduce_tables, run_cn_sweep, run_component_sweep, run_routing_trials, write_rows,
    write_tables, ExperimentConfig, RadiusKind, Scenario,
};
use dcwsn::geometry::{Deployment, Sampler};
use dcwsn::rng::{self, STREAM_AUX, STREAM_MARKS};
use dcwsn::schedules::{
    gamma_empirical, gamma_key_predistribution, KeyPredistribution, SchemeSpec, VbModel,
};
use dcwsn::{Error, Result};

use crate::{DetschedArgs, GammaArgs, GenArgs};

fn finish<W: Write>(mut out: csv::Writer<W>) -> Result<()> {
    out.flush().map_err(|e| Error::Csv(e.into()))
}

pub fn gen(a: &GenArgs, seed: u64, w: impl Write) -> Result<()> {
    let deployment = Deployment::sample(a.n, seed, Sampler::default())?;
    let schedules = a
        .scheme
        .spec(a.slots, a.awake)?
        .map(|spec| spec.assign(deployment.len(), &mut rng::stream(seed, STREAM_MARKS)));
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["index", "x", "y", "schedule"])?;
    for (i, p) in deployment.points().iter().enumerate() {
        let hex = schedules
            .as_ref()
            .map(|s| s[i].to_hex())
            .unwrap_or_default();
        out.write_record([i.to_string(), p.x.to_string(), p.y.to_string(), hex])?;
    }
    finish(out)
}

pub fn gamma(a: &GammaArgs, seed: u64, w: impl Write) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "scheme",
        "L",
        "d",
        "gamma_working",
        "gamma_exact",
        "gamma_empirical",
        "std_error",
    ])?;
    let specs = [
        ("dc-c", SchemeSpec::contiguous(a.slots, a.awake)?),
        ("dc-r", SchemeSpec::random_selection(a.slots, a.awake)?),
    ];
    for (i, (label, spec)) in specs.iter().enumerate() {
        let est = gamma_empirical(
            spec,
            a.trials,
            &mut rng::stream(rng::trial_seed(seed, 0, i as u64), STREAM_AUX),
        )?;
        out.write_record([
            label.to_string(),
            a.slots.to_string(),
            a.awake.to_string(),
            spec.gamma().to_string(),
            spec.gamma_exact().to_string(),
            est.value.to_string(),
            est.std_error.to_string(),
        ])?;
    }
    if let (Some(pool), Some(ring)) = (a.pool, a.ring) {
        let model = KeyPredistribution::new(pool, ring)?;
        let exact = gamma_key_predistribution(pool, ring)?;
        let est = gamma_empirical(
            &model,
            a.trials,
            &mut rng::stream(rng::trial_seed(seed, 0, 2), STREAM_AUX),
        )?;
        out.write_record([
            "kp".to_string(),
            pool.to_string(),
            ring.to_string(),
            model.gamma().to_string(),
            exact.to_string(),
            est.value.to_string(),
            est.std_error.to_string(),
        ])?;
    }
    finish(out)
}

pub fn radius(cfg: &ExperimentConfig, w: impl Write) -> Result<()> {
    let cn = cfg.cn_preset()?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "formula",
        "n",
        "delta",
        "L",
        "d",
        "cn",
        "radius",
        "ratio_weak_over_opt",
        "ratio_opt_over_rgg",
    ])?;
    for n in cfg.n_values() {
        for &delta in &cfg.delta {
            let (slots, awake) = cfg.shape(delta)?;
            let r = |k: RadiusKind| k.radius(cfg.scheme, n, slots, awake, cn);
            let (rgg, weak, optimal) = (
                r(RadiusKind::Rgg)?,
                r(RadiusKind::Weak)?,
                r(RadiusKind::Optimal)?,
            );
            for (kind, value) in [
                (RadiusKind::Rgg, rgg),
                (RadiusKind::Weak, weak),
                (RadiusKind::Optimal, optimal),
            ] {
                out.write_record([
                    kind.label().to_string(),
                    n.to_string(),
                    delta.to_string(),
                    slots.to_string(),
                    awake.to_string(),
                    cn.to_string(),
                    value.to_string(),
                    (weak / optimal).to_string(),
                    (optimal / rgg).to_string(),
                ])?;
            }
        }
    }
    finish(out)
}

pub fn tables(w: impl Write) -> Result<()> {
    write_tables(w, &reproduce_tables()?)
}

pub fn sweep(cfg: &ExperimentConfig, over_cn: bool, w: impl Write) -> Result<()> {
    let rows = if over_cn {
        run_cn_sweep(cfg)?
    } else {
        run_component_sweep(cfg)?
    };
    write_rows(w, &rows)
}

/// One row per routing run, or its energy when `power` is set.
pub fn route(cfg: &ExperimentConfig, only: &[Scenario], power: bool, w: impl Write) -> Result<()> {
    let scenarios = if only.is_empty() {
        &Scenario::ALL[..]
    } else {
        only
    };
    let records = run_routing_trials(cfg, scenarios)?;
    let mut out = csv::Writer::from_writer(w);
    if power {
        out.write_record(["scheme", "radius_kind", "tx_only", "operational", "total"])?;
    } else {
        out.write_record([
            "n",
            "scheme",
            "radius_kind",
            "relax",
            "delivered",
            "hops",
            "slots",
            "n_prime",
            "total_tx_slots",
        ])?;
    }
    for rec in &records {
        let run = &rec.run;
        let (scheme, kind) = (
            run.scenario.scheme().label(),
            run.scenario.radius_kind().label(),
        );
        if power {
            out.write_record([
                scheme.to_string(),
                kind.to_string(),
                run.power.tx_only.to_string(),
                run.power.operational.to_string(),
                run.power.total.to_string(),
            ])?;
        } else {
            let t = &run.trace;
            out.write_record([
                rec.n.to_string(),
                scheme.to_string(),
                kind.to_string(),
                run.rule.factor().to_string(),
                u8::from(t.delivered).to_string(),
                t.hop_count.to_string(),
                t.completion_slot.to_string(),
                t.n_prime().to_string(),
                t.total_tx_slots().to_string(),
            ])?;
        }
    }
    finish(out)
}

pub fn detsched(a: &DetschedArgs, seed: u64, w: impl Write) -> Result<()> {
    let k = a.k.unwrap_or_else(|| default_k(a.slots));
    let outcome = search_family(a.slots, a.awake, k, a.max_attempts, seed)?;
    let mut out = csv::Writer::from_writer(w);
    out.write_record([
        "status",
        "L",
        "d",
        "k",
        "attempts",
        "overlap_failures",
        "coverage_failures",
        "option",
        "schedule",
    ])?;
    let shape = [a.slots.to_string(), a.awake.to_string(), k.to_string()];
    match outcome {
        SearchOutcome::Found { family, attempts } => {
            let status = if a.verify {
                if !check_family(family.schedules())?.ok() {
                    return Err(Error::InvalidArgument(
                        "found family failed re-verification".into(),
                    ));
                }
                "verified"
            } else {
                "found"
            };
            for (i, s) in family.schedules().iter().enumerate() {
                out.write_record(
                    [status.to_string()]
                        .into_iter()
                        .chain(shape.iter().cloned())
                        .chain([
                            attempts.to_string(),
                            String::new(),
                            String::new(),
                            i.to_string(),
                            s.to_hex(),
                        ]),
                )?;
            }
        }
        SearchOutcome::Exhausted(stats) => {
            out.write_record(
                ["exhausted".to_string()]
                    .into_iter()
                    .chain(shape.iter().cloned())
                    .chain([
                        stats.attempts.to_string(),
                        stats.overlap_failures.to_string(),
                        stats.coverage_failures.to_string(),
                        String::new(),
                        String::new(),
                    ]),
            )?;
        }
    }
    finish(out)
}
