//! Slot-synchronous simulation of `Send(M, S, D)`.
//!
//! Slots are numbered globally from 0 and node `u` is awake in slot `t` iff
//! bit `t mod L` of its schedule is set. A node that transmits in slot `t` is
//! heard by every awake node within `r`. After its first *qualified*
//! reception at slot `t0`, a node transmits in each of its awake slots in
//! `(t0, t0 + L]`; the source does the same over slots `0..L`. Without duty
//! cycling every node is always awake and a retransmitter sends exactly once,
//! in the slot after it was triggered (the source in slot 0).
//!
//! A reception from `v` qualifies `u` when `|u - D| < |v - D|` (strict
//! greedy) or `|u - D| <= f |v - D|` (relaxed greedy with factor `f`).
//! When several qualified senders reach `u` in the same slot the trigger is
//! the one closest to `D`, then the lowest index. The run ends the first slot
//! `D` hears `M`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::geometry::{Deployment, Point, SpatialIndex};
use crate::schedules::Schedule;

/// Wake behaviour of the network.
#[derive(Clone, Copy, Debug)]
pub enum WakePattern<'a> {
    AlwaysAwake,
    Scheduled(&'a [Schedule]),
}

impl WakePattern<'_> {
    /// Cycle length; 1 when always awake.
    pub fn cycle(&self) -> usize {
        match self {
            WakePattern::AlwaysAwake => 1,
            WakePattern::Scheduled(s) => s.first().map_or(1, Schedule::slots),
        }
    }

    fn is_awake(&self, u: usize, t: u64) -> bool {
        match self {
            WakePattern::AlwaysAwake => true,
            WakePattern::Scheduled(s) => s[u].is_awake((t % s[u].slots() as u64) as usize),
        }
    }

    /// Slots in which `u` transmits after being triggered at `t0`.
    fn transmit_slots(&self, u: usize, t0: u64) -> Vec<u64> {
        match self {
            WakePattern::AlwaysAwake => vec![t0 + 1],
            WakePattern::Scheduled(s) => {
                let l = s[u].slots() as u64;
                (t0 + 1..=t0 + l)
                    .filter(|&t| s[u].is_awake((t % l) as usize))
                    .collect()
            }
        }
    }

    /// Transmission slots a node commits to: one cycle's awake slots.
    pub fn committed_slots(&self, u: usize) -> usize {
        match self {
            WakePattern::AlwaysAwake => 1,
            WakePattern::Scheduled(s) => s[u].awake(),
        }
    }
}

/// Which receptions trigger a retransmission.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TriggerRule {
    Strict,
    Relaxed(f64),
}

impl TriggerRule {
    /// `Strict` for factor 1, `Relaxed(f)` for `f > 1`.
    pub fn from_factor(f: f64) -> Result<Self> {
        if f == 1.0 {
            Ok(TriggerRule::Strict)
        } else if f > 1.0 && f.is_finite() {
            Ok(TriggerRule::Relaxed(f))
        } else {
            Err(Error::invalid(format!(
                "relax factor must be >= 1, got {f}"
            )))
        }
    }

    pub fn factor(&self) -> f64 {
        match *self {
            TriggerRule::Strict => 1.0,
            TriggerRule::Relaxed(f) => f,
        }
    }

    /// Whether a node at distance `du` from `D` is triggered by a sender at `dv`.
    pub fn qualifies(&self, du: f64, dv: f64) -> bool {
        match *self {
            TriggerRule::Strict => du < dv,
            TriggerRule::Relaxed(f) => du <= f * dv,
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct RouteConfig {
    pub r: f64,
    pub source: usize,
    pub dest: usize,
    pub rule: TriggerRule,
    pub max_slots: u64,
}

/// A node that took part in the flood.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Transmitter {
    pub node: usize,
    /// Sender whose transmission qualified this node; `None` for the source.
    pub trigger: Option<usize>,
    /// Slot of the qualifying reception; `None` for the source.
    pub triggered_at: Option<u64>,
    /// Slots this node transmits for.
    pub tx_slots: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RoutingTrace {
    pub delivered: bool,
    /// Edges on the trigger chain from S to D; 0 when not delivered.
    pub hop_count: usize,
    /// Slot in which D first heard M, or `max_slots` when it never did.
    pub completion_slot: u64,
    /// Source first, then retransmitters in the order they were triggered.
    pub transmitters: Vec<Transmitter>,
    /// S, relays, D; empty when not delivered.
    pub path: Vec<usize>,
    pub rule: TriggerRule,
    pub r: f64,
    pub node_count: usize,
}

impl RoutingTrace {
    /// Nodes that received and retransmitted M (the source excluded).
    pub fn retransmitters(&self) -> impl Iterator<Item = usize> + '_ {
        self.transmitters[1..].iter().map(|t| t.node)
    }

    pub fn n_prime(&self) -> usize {
        self.transmitters.len() - 1
    }

    pub fn total_tx_slots(&self) -> usize {
        self.transmitters.iter().map(|t| t.tx_slots).sum()
    }
}

/// `⌈|S - D| / r⌉`, the fewest hops any route can take.
pub fn hop_lower_bound(s: Point, d: Point, r: f64) -> Result<usize> {
    if !(r > 0.0) {
        return Err(Error::invalid(format!("radius must be positive, got {r}")));
    }
    Ok((s.distance(&d) / r).ceil() as usize)
}

/// Destination for a source at the origin: the node nearest to the point at
/// `distance` from the origin in direction `angle`.
pub fn pick_destination(deployment: &Deployment, distance: f64, angle: f64) -> usize {
    let (s, c) = angle.sin_cos();
    deployment.nearest_to(Point::new(distance * c, distance * s))
}

/// Runs the greedy directional flood from `cfg.source` to `cfg.dest`.
pub fn send_greedy(
    deployment: &Deployment,
    idx: &SpatialIndex,
    pattern: WakePattern<'_>,
    cfg: &RouteConfig,
) -> Result<RoutingTrace> {
    let m = deployment.len();
    if idx.len() != m {
        return Err(Error::invalid(
            "spatial index does not match the deployment",
        ));
    }
    if cfg.source >= m || cfg.dest >= m {
        return Err(Error::invalid(format!(
            "node index out of range: S={}, D={}, nodes={m}",
            cfg.source, cfg.dest
        )));
    }
    if cfg.source == cfg.dest {
        return Err(Error::invalid("source and destination must differ"));
    }
    if !(cfg.r >= 0.0) {
        return Err(Error::invalid(format!(
            "radius must be nonnegative, got {}",
            cfg.r
        )));
    }
    TriggerRule::from_factor(cfg.rule.factor())?;
    if let WakePattern::Scheduled(s) = pattern {
        if s.len() != m {
            return Err(Error::invalid(format!(
                "{} schedules for {m} nodes",
                s.len()
            )));
        }
        if s.iter().any(|x| x.slots() != s[0].slots()) {
            return Err(Error::invalid("schedules disagree on L"));
        }
    }
    if cfg.max_slots < pattern.cycle() as u64 {
        return Err(Error::invalid(format!(
            "max_slots {} is shorter than one cycle ({})",
            cfg.max_slots,
            pattern.cycle()
        )));
    }

    let dest_point = deployment.point(cfg.dest);
    let to_dest = |u: usize| deployment.point(u).distance(&dest_point);

    let mut committed = vec![false; m];
    let mut trigger_of: Vec<Option<usize>> = vec![None; m];
    let mut agenda: BTreeMap<u64, Vec<usize>> = BTreeMap::new();
    let mut transmitters = Vec::new();

    committed[cfg.source] = true;
    let source_slots: Vec<u64> = match pattern {
        WakePattern::AlwaysAwake => vec![0],
        WakePattern::Scheduled(s) => s[cfg.source].awake_slots().map(|k| k as u64).collect(),
    };
    for &t in &source_slots {
        agenda.entry(t).or_default().push(cfg.source);
    }
    transmitters.push(Transmitter {
        node: cfg.source,
        trigger: None,
        triggered_at: None,
        tx_slots: pattern.committed_slots(cfg.source),
    });

    // best qualified sender per newly reached node in the current slot
    let mut offers: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    while let Some((t, mut senders)) = agenda.pop_first() {
        if t >= cfg.max_slots {
            break;
        }
        senders.sort_unstable();
        senders.dedup();
        let mut heard_by_dest: Option<(f64, usize)> = None;
        offers.clear();
        for &v in &senders {
            let dv = to_dest(v);
            idx.for_each_within(deployment.point(v), cfg.r, |u| {
                if u == v || committed[u] || !pattern.is_awake(u, t) {
                    return;
                }
                let key = (dv, v);
                if u == cfg.dest {
                    if heard_by_dest.is_none_or(|best| key < best) {
                        heard_by_dest = Some(key);
                    }
                } else if cfg.rule.qualifies(to_dest(u), dv) {
                    let slot = offers.entry(u).or_insert(key);
                    if key < *slot {
                        *slot = key;
                    }
                }
            });
        }
        if let Some((_, v)) = heard_by_dest {
            trigger_of[cfg.dest] = Some(v);
            let mut path = vec![cfg.dest];
            let mut cur = cfg.dest;
            while let Some(prev) = trigger_of[cur] {
                path.push(prev);
                cur = prev;
            }
            path.reverse();
            return Ok(RoutingTrace {
                delivered: true,
                hop_count: path.len() - 1,
                completion_slot: t,
                transmitters,
                path,
                rule: cfg.rule,
                r: cfg.r,
                node_count: m,
            });
        }
        for (&u, &(_, v)) in &offers {
            committed[u] = true;
            trigger_of[u] = Some(v);
            for s in pattern.transmit_slots(u, t) {
                agenda.entry(s).or_default().push(u);
            }
            transmitters.push(Transmitter {
                node: u,
                trigger: Some(v),
                triggered_at: Some(t),
                tx_slots: pattern.committed_slots(u),
            });
        }
    }
    Ok(RoutingTrace {
        delivered: false,
        hop_count: 0,
        completion_slot: cfg.max_slots,
        transmitters,
        path: Vec::new(),
        rule: cfg.rule,
        r: cfg.r,
        node_count: m,
    })
}
