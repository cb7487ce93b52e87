//! Acceptance suite. Each test prints one `PASS`/`FAIL` line and then asserts.

use std::collections::VecDeque;
use std::time::Instant;

use rand::Rng;

use dcwsn::detsched::{
    bound_coverage, bound_overlap, check_family, sample_family, search_family, SearchOutcome,
};
use dcwsn::experiments::{
    component_trial, reproduce_tables, run_routing_power_suite, ExperimentConfig, RadiusKind,
    RowParams, SchemeChoice,
};
use dcwsn::geometry::{Deployment, Point, Sampler, SpatialIndex, DEFAULT_LEAF_CAPACITY};
use dcwsn::graph::{
    build_dc_graph, build_graph, component_labels, isolated_node_trial, stream_components,
    ConnectionSource, IsolatedOptions,
};
use dcwsn::power::{operational_power, tx_power, watts_per_100_slots, PowerProfile};
use dcwsn::radii::{eval_cn, rgg_radius, CnPreset};
use dcwsn::rng::{self, STREAM_AUX, STREAM_MARKS};
use dcwsn::routing::{
    hop_lower_bound, pick_destination, send_greedy, RouteConfig, TriggerRule, WakePattern,
};
use dcwsn::schedules::{
    gamma_contiguous, triangle_prob_contiguous, FullConnection, Schedule, SchemeSpec,
};
use dcwsn::stats::mean;

const TABLE_TOL: f64 = 1e-3;
const SQRT_LOG_TOL: f64 = 0.01;
const LOGLOG_SQ_TOL: f64 = 0.04;
const WEAK_DCC_MIN: f64 = 0.99;
const OPTIMAL_DCC_MIN: f64 = 0.88;
const COLLAPSE_MAX: f64 = 0.05;
const POWER_TOL_W: f64 = 0.01;
const DETSCHED_MIN: f64 = 0.90;

const SEEDS: u64 = 5;
const MASTER: u64 = 1;

fn report(id: u8, name: &str, pass: bool, detail: &str) {
    let tag = if pass { "PASS" } else { "FAIL" };
    println!("{tag} [{id:>2}] {name}: {detail}");
    assert!(pass, "criterion {id} ({name}) failed: {detail}");
}

fn fractions(p: &RowParams, row: u64) -> Vec<f64> {
    (0..SEEDS)
        .map(|t| {
            component_trial(p, rng::trial_seed(MASTER, row, t))
                .unwrap()
                .largest_fraction
        })
        .collect()
}

fn params(scheme: SchemeChoice, radius_kind: RadiusKind, cn: CnPreset, n: usize) -> RowParams {
    RowParams {
        scheme,
        radius_kind,
        cn,
        n,
        delta: 0.05,
        slots: 100,
        awake: 5,
    }
}

#[test]
fn c01_radius_ratio_tables() {
    let start = Instant::now();
    let entries = reproduce_tables().unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let bad: Vec<String> = entries
        .iter()
        .filter(|e| e.diff().abs() > TABLE_TOL)
        .map(|e| {
            format!(
                "table {} δ={} L={} {}: {:.4} vs {:.3}",
                e.table, e.delta, e.slots, e.scheme, e.computed, e.published
            )
        })
        .collect();
    let pass = entries.len() == 48 && bad.is_empty() && elapsed < 1.0;
    report(
        1,
        "radius-ratio tables within ±0.001",
        pass,
        &format!(
            "{}/48 within tolerance in {elapsed:.3}s; off: [{}]",
            48 - bad.len(),
            bad.join("; ")
        ),
    );
}

#[test]
fn c02_cn_presets_against_published_values() {
    // (n, -(ln ln n)², -2√ln n, -2.5√ln n) as printed
    let table = [
        (0.5e6, -6.60, -5.25, -6.57),
        (1.0e6, -6.86, -7.43, -9.29),
        (1.5e6, -7.02, -9.10, -11.38),
        (2.0e6, -7.12, -10.51, -13.14),
        (2.5e6, -7.23, -11.75, -14.69),
    ];
    let mut sqrt_bad = Vec::new();
    let mut loglog_bad = Vec::new();
    for (n, sq, k2, k25) in table {
        for (k, printed) in [(2.0, k2), (2.5, k25)] {
            let v = eval_cn(CnPreset::NegKSqrtLog(k), n).unwrap();
            if (v - printed).abs() > SQRT_LOG_TOL {
                sqrt_bad.push(format!("k={k} n={n:e}: {v:.2} vs {printed}"));
            }
        }
        let v = eval_cn(CnPreset::NegLogLogSq, n).unwrap();
        if (v - sq).abs() > LOGLOG_SQ_TOL {
            loglog_bad.push(format!("n={n:e}: {v:.3} vs {sq}"));
        }
    }
    let at_1e6 = eval_cn(CnPreset::NegLogLogSq, 1e6).unwrap();
    report(
        2,
        "c(n) presets match printed values",
        sqrt_bad.is_empty() && loglog_bad.is_empty(),
        &format!(
            "k√ln n: {}/10 within ±{SQRT_LOG_TOL} [{}]; (ln ln n)²: {}/5 within ±{LOGLOG_SQ_TOL} [{}]; n=1e6 gives {at_1e6:.3}, printed -6.86",
            10 - sqrt_bad.len(),
            sqrt_bad.join("; "),
            5 - loglog_bad.len(),
            loglog_bad.join("; ")
        ),
    );
}

#[test]
fn c03_weak_radius_connectivity() {
    let n = 200_000;
    let dcc = fractions(
        &params(
            SchemeChoice::Contiguous,
            RadiusKind::Weak,
            CnPreset::LogLog,
            n,
        ),
        0,
    );
    let dcr = fractions(
        &params(
            SchemeChoice::RandomSelection,
            RadiusKind::Weak,
            CnPreset::LogLog,
            n,
        ),
        1,
    );
    let pass = mean(&dcc) >= WEAK_DCC_MIN && dcr.iter().all(|f| *f == 1.0);
    report(
        3,
        "weak radius connects",
        pass,
        &format!(
            "dc-c mean {:.5} (need ≥ {WEAK_DCC_MIN}) {dcc:?}; dc-r {dcr:?} (need all 1.0)",
            mean(&dcc)
        ),
    );
}

#[test]
fn c04_optimal_radius_connectivity() {
    let f = fractions(
        &params(
            SchemeChoice::Contiguous,
            RadiusKind::Optimal,
            CnPreset::LogLog,
            200_000,
        ),
        0,
    );
    let m = mean(&f);
    report(
        4,
        "optimal radius keeps most nodes connected",
        m >= OPTIMAL_DCC_MIN,
        &format!("dc-c mean fraction {m:.4} (need ≥ {OPTIMAL_DCC_MIN}, 0.90 at full scale) {f:?}"),
    );
}

#[test]
fn c05_necessity_of_the_log_term() {
    let mut collapse = Vec::new();
    for (row, n) in [200_000, 500_000].into_iter().enumerate() {
        let p = params(
            SchemeChoice::Contiguous,
            RadiusKind::Optimal,
            CnPreset::NegLogLogSq,
            n,
        );
        collapse.push((n, mean(&fractions(&p, row as u64))));
    }
    let mut isolated = Vec::new();
    for (row, n) in [100_000, 200_000, 500_000].into_iter().enumerate() {
        let p = params(
            SchemeChoice::Contiguous,
            RadiusKind::Optimal,
            CnPreset::NegConst(1.0),
            n,
        );
        let counts: Vec<f64> = (0..SEEDS)
            .map(|t| {
                component_trial(&p, rng::trial_seed(MASTER, 10 + row as u64, t))
                    .unwrap()
                    .isolated_count as f64
            })
            .collect();
        isolated.push((n, mean(&counts)));
    }
    let collapsed = collapse.iter().all(|(_, f)| *f < COLLAPSE_MAX);
    let increasing = isolated.windows(2).all(|w| w[0].1 < w[1].1);
    report(
        5,
        "negative c(n) disconnects",
        collapsed && increasing,
        &format!("-(ln ln n)² largest fraction {collapse:?} (need < {COLLAPSE_MAX}); c=-1 isolated means {isolated:?} (need increasing)"),
    );
}

#[test]
fn c06_isolated_nodes_are_poisson() {
    let n = 100_000;
    let trials = 200;
    // mean degree n r² = ln n + c with c = 0 at density n/π
    let r = ((n as f64).ln() / n as f64).sqrt();
    let res = isolated_node_trial(
        n,
        r,
        &FullConnection,
        trials,
        MASTER,
        IsolatedOptions::default(),
    )
    .unwrap();
    let band = 3.0 * (1.0 / trials as f64).sqrt();
    let mean_ok = (res.mean - 1.0).abs() <= band;
    let var_ok = (0.6..=1.5).contains(&res.variance);
    report(
        6,
        "isolated-node count is Poisson(e^-c)",
        mean_ok && var_ok,
        &format!(
            "mean {:.3} (need 1 ± {band:.3}), variance {:.3} (need [0.6, 1.5]) over {trials} trials",
            res.mean, res.variance
        ),
    );
}

#[test]
fn c07_triangle_dependence() {
    let (d, l) = (5, 100);
    let sched: Vec<Schedule> = (0..l)
        .map(|s| Schedule::contiguous_from(l, d, s).unwrap())
        .collect();
    let overlap: Vec<Vec<bool>> = sched
        .iter()
        .map(|a| sched.iter().map(|b| a.overlaps_unchecked(b)).collect())
        .collect();
    let mut count = 0u64;
    for a in 0..l {
        for b in 0..l {
            if !overlap[a][b] {
                continue;
            }
            count += (0..l).filter(|&c| overlap[a][c] && overlap[b][c]).count() as u64;
        }
    }
    let closed = triangle_prob_contiguous(d, l).unwrap();
    let g3 = gamma_contiguous(d, l).unwrap().powi(3);
    let exact = count == 6100 && (closed - 61.0 / 10_000.0).abs() < 1e-15;
    report(
        7,
        "triangle probability exceeds γ³",
        exact && (closed - g3).abs() > 1e-3,
        &format!("enumerated {count}/10^6, closed form {closed}, γ³ = {g3:.6}"),
    );
}

#[test]
fn c08_power_figures() {
    let p = PowerProfile::default();
    let on = Schedule::all_awake(100).unwrap();
    let always = watts_per_100_slots(
        operational_power(&on, 100, on.transitions_per_cycle(), &p),
        100,
    );
    let dcc = Schedule::contiguous_from(100, 5, 40).unwrap();
    let dcc_w = watts_per_100_slots(
        operational_power(&dcc, 100, dcc.transitions_per_cycle(), &p),
        100,
    );
    let dcr = Schedule::from_slots(100, &[3, 20, 41, 60, 88]).unwrap();
    let dcr_w = watts_per_100_slots(
        operational_power(&dcr, 100, dcr.transitions_per_cycle(), &p),
        100,
    );
    let tx = tx_power(p.ref_radius, &p).unwrap();
    let pass = (always - 3.2).abs() <= POWER_TOL_W
        && (dcc_w - 0.19).abs() <= POWER_TOL_W
        && (dcr_w - 0.31).abs() <= POWER_TOL_W
        && tx == 50.0;
    report(
        8,
        "operational and transmission power",
        pass,
        &format!("always-on {always:.4} W, dc-c {dcc_w:.4} W, dc-r {dcr_w:.4} W, tx(ref) {tx} mW"),
    );
}

/// 21 options that all contain slot 0 and together cover `0..600`.
fn sunflower_family() -> Vec<Schedule> {
    let (l, d) = (600, 30);
    (0..21)
        .map(|i| {
            let mut slots = vec![0];
            slots.extend((1 + 29 * i..1 + 29 * (i + 1)).map(|s| if s < l { s } else { s - l + 1 }));
            slots.sort_unstable();
            slots.dedup();
            let mut extra = 1;
            while slots.len() < d {
                if !slots.contains(&extra) {
                    slots.push(extra);
                }
                extra += 1;
            }
            Schedule::from_slots(l, &slots).unwrap()
        })
        .collect()
}

#[test]
fn c09_deterministic_family() {
    let (l, d) = (600, 30);
    let k = dcwsn::detsched::default_k(l);
    let outcome = search_family(l, d, k, 1000, MASTER).unwrap();
    let (found, family, search_note) = match outcome {
        SearchOutcome::Found { family, attempts } => {
            (true, family.schedules().to_vec(), format!("search found k={k} in {attempts} attempts"))
        }
        SearchOutcome::Exhausted(s) => (
            false,
            sunflower_family(),
            format!(
                "search exhausted: k={k}, {} attempts, overlap failures {}, coverage failures {}; hand-built 21-option family used below",
                s.attempts, s.overlap_failures, s.coverage_failures
            ),
        ),
    };
    assert!(check_family(&family).unwrap().ok());

    let n = 200_000;
    let r = rgg_radius(n as f64, CnPreset::LogLog).unwrap();
    let dep = Deployment::sample(n, MASTER, Sampler::default()).unwrap();
    let idx = SpatialIndex::build(&dep, DEFAULT_LEAF_CAPACITY).unwrap();
    let spec = SchemeSpec::family(family).unwrap();
    let schedules = spec.assign(dep.len(), &mut rng::stream(MASTER, STREAM_MARKS));
    let dc = build_dc_graph(&dep, &schedules, r, &idx).unwrap();
    let marks = vec![(); dep.len()];
    let rgg = build_graph(
        &idx,
        r,
        &marks,
        |_, _| true,
        ConnectionSource::VbModel("rgg".into()),
    );
    let identical = dc.edges().eq(rgg.edges());
    let frac = stream_components(&idx, r, &schedules)
        .unwrap()
        .largest_fraction;

    let grid_bad = bound_grid_violations();
    let pass = found && identical && frac >= DETSCHED_MIN && grid_bad.is_empty();
    report(
        9,
        "deterministic schedule family",
        pass,
        &format!(
            "{search_note}; edge-identical to RGG: {identical}; largest fraction {frac:.4} (need ≥ {DETSCHED_MIN}); bound grid violations: {grid_bad:?}"
        ),
    );
}

/// Empirical failure rates above the analytic complements by more than 3σ.
fn bound_grid_violations() -> Vec<String> {
    let families = 2000u64;
    let mut bad = Vec::new();
    let mut cell = 0u64;
    for l in [200usize, 500, 1000] {
        for delta in [0.1, 0.2] {
            let d = (delta * l as f64).round() as usize;
            let base = ((l as f64).ln() / delta).ceil() as usize;
            for k in [base + 5, 2 * base] {
                let mut overlap_fail = 0u64;
                let mut cover_fail = 0u64;
                for a in 0..families {
                    let c = check_family(&sample_family(l, d, k, 0xb0 + cell, a).unwrap()).unwrap();
                    overlap_fail += u64::from(!c.pairwise_overlap);
                    cover_fail += u64::from(!c.full_coverage);
                }
                for (name, fails, q) in [
                    ("overlap", overlap_fail, 1.0 - bound_overlap(k, delta, d)),
                    ("coverage", cover_fail, 1.0 - bound_coverage(l, delta, k)),
                ] {
                    let rate = fails as f64 / families as f64;
                    let sigma = (q.max(1.0 / families as f64) * (1.0 - q).max(0.0)
                        / families as f64)
                        .sqrt();
                    if rate > q + 3.0 * sigma {
                        bad.push(format!("L={l} δ={delta} k={k} {name}: {rate:.4} > {q:.4}"));
                    }
                }
                cell += 1;
            }
        }
    }
    assert_eq!(cell, 12);
    bad
}

fn brute_within(points: &[Point], c: usize, r: f64) -> Vec<usize> {
    (0..points.len())
        .filter(|&j| j != c && points[c].dist_sq(&points[j]) <= r * r)
        .collect()
}

fn bfs_labels(g: &dcwsn::graph::DCGraph) -> Vec<usize> {
    let mut label = vec![usize::MAX; g.node_count()];
    for s in 0..g.node_count() {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if label[v as usize] == usize::MAX {
                    label[v as usize] = s;
                    queue.push_back(v as usize);
                }
            }
        }
    }
    label
}

#[test]
fn c10_oracle_equivalence() {
    let mut rng = rng::stream(MASTER, STREAM_AUX);
    let mut failures = Vec::new();

    for case in 0..50 {
        let n = rng.random_range(1..=2000);
        let dep = Deployment::sample(n, 1000 + case, Sampler::default()).unwrap();
        let idx = SpatialIndex::build(&dep, rng.random_range(1..=64)).unwrap();
        let r = rng.random_range(0.0..0.5);
        let c = rng.random_range(0..dep.len());
        if idx.radius_query(c, r).unwrap() != brute_within(dep.points(), c, r) {
            failures.push(format!("radius query case {case}"));
        }
    }

    for case in 0..100 {
        let n = rng.random_range(1..=500);
        let dep = Deployment::sample(n, 2000 + case, Sampler::default()).unwrap();
        let idx = SpatialIndex::build(&dep, DEFAULT_LEAF_CAPACITY).unwrap();
        let l = rng.random_range(1..=50);
        let d = rng.random_range(1..=l);
        let spec = SchemeSpec::random_selection(l, d).unwrap();
        let schedules = spec.assign(dep.len(), &mut rng::stream(2000 + case, STREAM_MARKS));
        let g = build_dc_graph(&dep, &schedules, rng.random_range(0.0..0.3), &idx).unwrap();
        if component_labels(&g) != bfs_labels(&g) {
            failures.push(format!("components case {case}"));
        }
    }

    for case in 0..20 {
        let n = rng.random_range(1..=500);
        let dep = Deployment::sample(n, 3000 + case, Sampler::default()).unwrap();
        let idx = SpatialIndex::build(&dep, DEFAULT_LEAF_CAPACITY).unwrap();
        let spec = SchemeSpec::contiguous(100, rng.random_range(1..=20)).unwrap();
        let schedules = spec.assign(dep.len(), &mut rng::stream(3000 + case, STREAM_MARKS));
        let r = rng.random_range(0.0..0.4);
        let g = build_dc_graph(&dep, &schedules, r, &idx).unwrap();
        let p = dep.points();
        let mut brute = Vec::new();
        for u in 0..p.len() {
            for v in u + 1..p.len() {
                if p[u].dist_sq(&p[v]) <= r * r && schedules[u].overlaps_unchecked(&schedules[v]) {
                    brute.push((u, v));
                }
            }
        }
        if g.edges().collect::<Vec<_>>() != brute {
            failures.push(format!("dc graph case {case}"));
        }
    }

    for l in 1..=64usize {
        for d in 1..=l {
            let starts: Vec<Schedule> = (0..l)
                .map(|s| Schedule::contiguous_from(l, d, s).unwrap())
                .collect();
            let hits = starts
                .iter()
                .map(|a| starts.iter().filter(|b| a.overlaps_unchecked(b)).count())
                .sum::<usize>();
            let g = gamma_contiguous(d, l).unwrap();
            if (g * (l * l) as f64).round() as usize != hits
                || (g - hits as f64 / (l * l) as f64).abs() > 1e-15
            {
                failures.push(format!("gamma_contiguous L={l} d={d}"));
            }
        }
    }

    report(
        10,
        "oracle equivalence",
        failures.is_empty(),
        &format!(
            "50 radius queries, 100 component partitions, 20 edge sets, all (L≤64, d) γ values; mismatches: {failures:?}"
        ),
    );
}

#[test]
fn c11_routing_properties_and_ordering() {
    let mut rng = rng::stream(MASTER + 11, STREAM_AUX);
    let mut violations = Vec::new();
    for case in 0..25u64 {
        let n = rng.random_range(2_000..=20_000);
        let dep = Deployment::sample(n, 5000 + case, Sampler::default()).unwrap();
        let idx = SpatialIndex::build(&dep, DEFAULT_LEAF_CAPACITY).unwrap();
        let cn = CnPreset::LogLog;
        let rgg = rgg_radius(n as f64, cn).unwrap();
        let r = rgg * rng.random_range(1.0..4.0);
        let rule = if rng.random_bool(0.5) {
            TriggerRule::Strict
        } else {
            TriggerRule::Relaxed(1.2)
        };
        let l = 20;
        let schedules = SchemeSpec::contiguous(l, rng.random_range(1..=l))
            .unwrap()
            .assign(dep.len(), &mut rng::stream(5000 + case, STREAM_MARKS));
        let pattern = if case % 5 == 0 {
            WakePattern::AlwaysAwake
        } else {
            WakePattern::Scheduled(&schedules)
        };
        let cfg = RouteConfig {
            r,
            source: 0,
            dest: pick_destination(
                &dep,
                rng.random_range(0.05..0.3),
                rng.random_range(0.0..std::f64::consts::TAU),
            ),
            rule,
            max_slots: 200 * l as u64,
        };
        let trace = send_greedy(&dep, &idx, pattern, &cfg).unwrap();
        let dist_d = |u: usize| dep.point(u).distance(&dep.point(cfg.dest));

        let mut seen = vec![false; dep.len()];
        for t in &trace.transmitters {
            if std::mem::replace(&mut seen[t.node], true) {
                violations.push(format!("case {case}: node {} retransmits twice", t.node));
            }
            if let Some(v) = t.trigger {
                if !rule.qualifies(dist_d(t.node), dist_d(v))
                    || dep.point(t.node).distance(&dep.point(v)) > r
                {
                    violations.push(format!(
                        "case {case}: node {} triggered by unqualified {v}",
                        t.node
                    ));
                }
            } else if t.node != cfg.source {
                violations.push(format!("case {case}: node {} has no trigger", t.node));
            }
        }
        if trace.delivered {
            let lb = hop_lower_bound(dep.point(cfg.source), dep.point(cfg.dest), r).unwrap();
            let path_ok = trace.path.first() == Some(&cfg.source)
                && trace.path.last() == Some(&cfg.dest)
                && trace
                    .path
                    .windows(2)
                    .all(|w| dep.point(w[0]).distance(&dep.point(w[1])) <= r);
            if trace.hop_count < lb || !path_ok {
                violations.push(format!(
                    "case {case}: hops {} < {lb} or bad path",
                    trace.hop_count
                ));
            }
        }
    }

    let cfg = ExperimentConfig {
        n: vec![200_000],
        repetitions: SEEDS as usize,
        seed: MASTER,
        ..Default::default()
    };
    let rows = run_routing_power_suite(&cfg).unwrap();
    let hops = |scheme: &str, kind: &str| {
        rows.iter()
            .find(|r| r.scheme == scheme && r.radius_kind == kind && r.metric == "hops")
            .unwrap()
            .mean
    };
    let rgg = hops("rgg", "rgg");
    let optimal = [hops("dc-c", "optimal"), hops("dc-r", "optimal")];
    let weak = [hops("dc-c", "weak"), hops("dc-r", "weak")];
    let ordered =
        optimal.iter().all(|o| rgg > *o) && optimal.iter().all(|o| weak.iter().all(|w| o > w));
    report(
        11,
        "routing invariants and hop ordering",
        violations.is_empty() && ordered,
        &format!(
            "25 instances, violations {violations:?}; mean hops rgg {rgg:.1}, optimal (dc-c, dc-r) {optimal:.1?}, weak (dc-c, dc-r) {weak:.1?}"
        ),
    );
}
