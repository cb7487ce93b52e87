use proptest::prelude::*;

use dcwsn::detsched::{check_family, search_family, SearchOutcome};
use dcwsn::geometry::{Deployment, Sampler, SpatialIndex};
use dcwsn::graph::{build_dc_graph, build_graph, components, ConnectionSource, UnionFind};
use dcwsn::power::{task_power, PowerProfile};
use dcwsn::radii::{optimal_radius, rgg_radius, weak_radius, CnPreset, MAX_RADIUS};
use dcwsn::rng::{self, STREAM_MARKS};
use dcwsn::routing::{pick_destination, send_greedy, RouteConfig, TriggerRule, WakePattern};
use dcwsn::schedules::{gamma_random, gamma_random_exact, Schedule, SchemeSpec};

fn sampler() -> impl Strategy<Value = Sampler> {
    prop_oneof![
        Just(Sampler::Polar),
        (1e-4..0.39f64).prop_map(|angle| Sampler::Wedge { angle })
    ]
}

fn schedules(n: usize, l: usize, d: usize, random: bool, seed: u64) -> Vec<Schedule> {
    let spec = if random {
        SchemeSpec::random_selection(l, d).unwrap()
    } else {
        SchemeSpec::contiguous(l, d).unwrap()
    };
    spec.assign(n, &mut rng::stream(seed, STREAM_MARKS))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn deployments_stay_in_the_disk(n in 1usize..3000, seed: u64, s in sampler()) {
        let a = Deployment::sample(n, seed, s).unwrap();
        prop_assert_eq!(a.len(), n + 1);
        prop_assert_eq!(a.point(0).norm_sq(), 0.0);
        prop_assert!(a.points().iter().all(|p| p.norm_sq() <= 1.0));
        let b = Deployment::sample(n, seed, s).unwrap();
        prop_assert!(a.points().iter().zip(b.points()).all(|(p, q)| p.x.to_bits() == q.x.to_bits() && p.y.to_bits() == q.y.to_bits()));
    }

    #[test]
    fn kd_leaves_respect_capacity(n in 1usize..5000, cap in 1usize..64, seed: u64) {
        let dep = Deployment::sample(n, seed, Sampler::Polar).unwrap();
        let idx = SpatialIndex::build(&dep, cap).unwrap();
        let mut seen = 0;
        for leaf in idx.leaves() {
            prop_assert!(leaf.len() <= cap);
            seen += leaf.len();
        }
        prop_assert_eq!(seen, dep.len());
    }

    #[test]
    fn schedule_shape_and_overlap(l in 1usize..300, frac in 0.0..1.0f64, seed: u64, random: bool) {
        let d = 1 + (frac * (l - 1) as f64) as usize;
        let s = schedules(2, l, d, random, seed);
        for x in &s {
            prop_assert_eq!(x.awake(), d);
            prop_assert_eq!(x.awake_slots().count(), d);
            prop_assert_eq!(&Schedule::from_hex(l, &x.to_hex()).unwrap(), x);
        }
        let direct = s[0].awake_slots().any(|k| s[1].is_awake(k));
        prop_assert_eq!(s[0].overlaps(&s[1]).unwrap(), direct);
        prop_assert_eq!(s[1].overlaps(&s[0]).unwrap(), direct);
    }

    #[test]
    fn gamma_bounds(l in 1usize..400, frac in 0.0..1.0f64) {
        let d = 1 + (frac * (l - 1) as f64) as usize;
        let c = SchemeSpec::contiguous(l, d).unwrap().gamma();
        let working = gamma_random(d, l).unwrap();
        let exact = gamma_random_exact(d, l).unwrap();
        prop_assert!(c > 0.0 && c <= 1.0);
        prop_assert!(working > 0.0 && working <= exact + 1e-12 && exact <= 1.0);
    }

    #[test]
    fn radii_are_ordered_and_capped(n in 3.0..1e8f64, delta in 0.01..1.0f64, c in -2.0..5.0f64) {
        let cn = CnPreset::Const(c);
        if (n.ln() + c) > 0.0 {
            let rgg = rgg_radius(n, cn).unwrap();
            let weak = weak_radius(n, delta, cn).unwrap();
            prop_assert!(rgg > 0.0 && rgg <= MAX_RADIUS);
            prop_assert!(weak >= rgg && weak <= MAX_RADIUS);
            let opt = optimal_radius(n, delta, cn).unwrap();
            prop_assert!((opt - weak).abs() <= 1e-12 * weak);
        }
    }

    #[test]
    fn graph_edges_are_short_symmetric_and_monotone(
        n in 1usize..400, seed: u64, r in 0.0..0.4f64, grow in 0.0..0.2f64, l in 2usize..40, random: bool
    ) {
        let dep = Deployment::sample(n, seed, Sampler::default()).unwrap();
        let idx = SpatialIndex::build(&dep, 8).unwrap();
        let s = schedules(dep.len(), l, 1 + l / 4, random, seed);
        let g = build_dc_graph(&dep, &s, r, &idx).unwrap();
        let wider = build_dc_graph(&dep, &s, r + grow, &idx).unwrap();
        for (u, v) in g.edges() {
            prop_assert!(u < v);
            prop_assert!(dep.point(u).distance(&dep.point(v)) <= r);
            prop_assert!(g.has_edge(v, u) && s[u].overlaps_unchecked(&s[v]));
            prop_assert!(wider.has_edge(u, v));
        }
        prop_assert!((0..g.node_count()).all(|u| !g.has_edge(u, u)));
        let marks = vec![(); dep.len()];
        let rgg = build_graph(&idx, r, &marks, |_, _| true, ConnectionSource::Schedules);
        prop_assert!(g.edges().all(|(u, v)| rgg.has_edge(u, v)));
    }

    #[test]
    fn component_stats_are_consistent(n in 1usize..400, seed: u64, r in 0.0..0.3f64) {
        let dep = Deployment::sample(n, seed, Sampler::default()).unwrap();
        let idx = SpatialIndex::build(&dep, 8).unwrap();
        let s = schedules(dep.len(), 10, 3, false, seed);
        let g = build_dc_graph(&dep, &s, r, &idx).unwrap();
        let st = components(&g);
        prop_assert_eq!(st.node_count, n + 1);
        prop_assert!(st.largest_size + st.second_largest_size <= n + 1);
        prop_assert_eq!(st.isolated_count, (0..g.node_count()).filter(|&u| g.degree(u) == 0).count());
        prop_assert_eq!(st.largest_fraction, st.largest_size as f64 / (n + 1) as f64);
    }

    #[test]
    fn union_find_matches_naive_relabelling(n in 1usize..60, pairs in prop::collection::vec((0usize..60, 0usize..60), 0..80)) {
        let mut uf = UnionFind::new(n);
        let mut label: Vec<usize> = (0..n).collect();
        for (a, b) in pairs.into_iter().filter(|(a, b)| *a < n && *b < n) {
            uf.union(a, b);
            let (from, to) = (label[a].max(label[b]), label[a].min(label[b]));
            for x in label.iter_mut().filter(|x| **x == from) {
                *x = to;
            }
        }
        prop_assert_eq!(uf.labels(), label.clone());
        let mut distinct = label;
        distinct.sort_unstable();
        distinct.dedup();
        prop_assert_eq!(uf.sets(), distinct.len());
    }

    #[test]
    fn found_families_satisfy_both_properties(l in 4usize..40, k in 2usize..12, seed: u64) {
        let d = l / 2;
        if let SearchOutcome::Found { family, .. } = search_family(l, d, k, 200, seed).unwrap() {
            let c = check_family(family.schedules()).unwrap();
            prop_assert!(c.pairwise_overlap && c.full_coverage);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn routing_traces_obey_the_protocol(
        n in 200usize..3000, seed: u64, scale in 1.5..5.0f64, relax in 1.0..1.5f64,
        l in 1usize..20, always: bool, dist in 0.05..0.5f64
    ) {
        let dep = Deployment::sample(n, seed, Sampler::default()).unwrap();
        let idx = SpatialIndex::build(&dep, 16).unwrap();
        let r = scale * rgg_radius(n as f64, CnPreset::LogLog).unwrap();
        let s = schedules(dep.len(), l, 1 + l / 3, true, seed);
        let pattern = if always { WakePattern::AlwaysAwake } else { WakePattern::Scheduled(&s) };
        let rule = TriggerRule::from_factor(relax.max(1.0)).unwrap();
        let cfg = RouteConfig { r, source: 0, dest: pick_destination(&dep, dist, 1.0), rule, max_slots: 100 * l as u64 };
        let trace = send_greedy(&dep, &idx, pattern, &cfg).unwrap();
        let d = |u: usize| dep.point(u).distance(&dep.point(cfg.dest));
        let mut seen = vec![false; dep.len()];
        prop_assert_eq!(trace.transmitters[0].node, cfg.source);
        for t in &trace.transmitters {
            prop_assert!(!std::mem::replace(&mut seen[t.node], true));
            prop_assert_eq!(t.tx_slots, pattern.committed_slots(t.node));
            if let Some(v) = t.trigger {
                prop_assert!(rule.qualifies(d(t.node), d(v)));
                prop_assert!(dep.point(t.node).distance(&dep.point(v)) <= r);
            }
        }
        if trace.delivered {
            prop_assert_eq!(trace.path.first(), Some(&cfg.source));
            prop_assert_eq!(trace.path.last(), Some(&cfg.dest));
            prop_assert_eq!(trace.hop_count, trace.path.len() - 1);
            prop_assert!(trace.completion_slot < cfg.max_slots);
        } else {
            prop_assert_eq!(trace.completion_slot, cfg.max_slots);
        }
        let p = task_power(&trace, r, pattern, &PowerProfile::default()).unwrap();
        prop_assert!(p.tx_only >= 0.0 && p.operational >= 0.0);
        prop_assert!((p.total - (p.tx_only + p.operational)).abs() <= 1e-9 * p.total.max(1.0));
    }
}
