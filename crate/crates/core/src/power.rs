//! Energy accounting in milliwatt-slots.

use crate::error::{Error, Result};
use crate::radii::{rgg_radius, CnPreset};
use crate::routing::{RoutingTrace, WakePattern};
use crate::schedules::Schedule;

/// Per-slot power draw of each sensor mode, in mW.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerProfile {
    pub sleep_mw: f64,
    pub startup_mw: f64,
    pub shutdown_mw: f64,
    pub awake_rx_mw: f64,
    /// Transmission power at `ref_radius`.
    pub tx_ref_mw: f64,
    pub ref_radius: f64,
}

/// Network size at which the reference radius is calibrated.
pub const REFERENCE_N: f64 = 2e5;

impl Default for PowerProfile {
    fn default() -> Self {
        PowerProfile {
            sleep_mw: 0.015,
            startup_mw: 15.0,
            shutdown_mw: 15.0,
            awake_rx_mw: 32.0,
            tx_ref_mw: 50.0,
            ref_radius: rgg_radius(REFERENCE_N, CnPreset::LogLog).expect("reference radius"),
        }
    }
}

impl PowerProfile {
    pub fn validate(&self) -> Result<()> {
        let fields = [
            self.sleep_mw,
            self.startup_mw,
            self.shutdown_mw,
            self.awake_rx_mw,
            self.tx_ref_mw,
            self.ref_radius,
        ];
        if fields.iter().all(|v| *v > 0.0 && v.is_finite()) {
            Ok(())
        } else {
            Err(Error::invalid("power profile values must be positive"))
        }
    }
}

/// Transmission power needed to reach `r`, scaled quadratically from the
/// reference radius.
pub fn tx_power(r: f64, profile: &PowerProfile) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::invalid(format!("radius must be positive, got {r}")));
    }
    Ok(profile.tx_ref_mw * (r / profile.ref_radius).powi(2))
}

/// Cost of running `schedule` for `slots` slots starting at slot 0, with
/// `transitions_per_cycle` mode switches per cycle, half of them startups.
/// Transitions are pro-rated when `slots` is not a whole number of cycles.
pub fn operational_power(
    schedule: &Schedule,
    slots: u64,
    transitions_per_cycle: usize,
    profile: &PowerProfile,
) -> f64 {
    let l = schedule.slots() as u64;
    let awake_per_cycle = schedule.awake() as u64;
    let awake_in_tail = (0..slots % l)
        .filter(|&k| schedule.is_awake(k as usize))
        .count() as u64;
    let awake = slots / l * awake_per_cycle + awake_in_tail;
    let sleep = slots - awake;
    let transitions = transitions_per_cycle as f64 * slots as f64 / l as f64;
    awake as f64 * profile.awake_rx_mw
        + sleep as f64 * profile.sleep_mw
        + transitions / 2.0 * (profile.startup_mw + profile.shutdown_mw)
}

/// Cost of a node that never sleeps.
pub fn always_awake_power(slots: u64, profile: &PowerProfile) -> f64 {
    slots as f64 * profile.awake_rx_mw
}

/// Converts an energy over `window` slots to watts per 100 slots.
pub fn watts_per_100_slots(mw_slots: f64, window: u64) -> f64 {
    mw_slots / window as f64 * 100.0 / 1000.0
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NodePower {
    pub tx: f64,
    pub operational: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PowerReport {
    pub tx_only: f64,
    pub operational: f64,
    pub total: f64,
    /// Slots `0..=completion_slot` covered by the operational term.
    pub window: u64,
    pub per_node: Vec<NodePower>,
}

/// Energy of one `Send(M, S, D)` run: transmission by every node that sent
/// `M` plus the operation of every node over the run.
pub fn task_power(
    trace: &RoutingTrace,
    r: f64,
    pattern: WakePattern<'_>,
    profile: &PowerProfile,
) -> Result<PowerReport> {
    profile.validate()?;
    if r != trace.r {
        return Err(Error::invalid(format!(
            "trace ran at r={}, asked for r={r}",
            trace.r
        )));
    }
    if let WakePattern::Scheduled(s) = pattern {
        if s.len() != trace.node_count {
            return Err(Error::invalid(format!(
                "{} schedules for a trace over {} nodes",
                s.len(),
                trace.node_count
            )));
        }
    }
    let window = trace.completion_slot + 1;
    let mut per_node: Vec<NodePower> = match pattern {
        WakePattern::AlwaysAwake => vec![
            NodePower {
                tx: 0.0,
                operational: always_awake_power(window, profile),
            };
            trace.node_count
        ],
        WakePattern::Scheduled(s) => s
            .iter()
            .map(|sch| NodePower {
                tx: 0.0,
                operational: operational_power(sch, window, sch.transitions_per_cycle(), profile),
            })
            .collect(),
    };
    let p = if trace.transmitters.is_empty() {
        0.0
    } else {
        tx_power(r, profile)?
    };
    for t in &trace.transmitters {
        per_node[t.node].tx += t.tx_slots as f64 * p;
    }
    let tx_only: f64 = per_node.iter().map(|x| x.tx).sum();
    let operational: f64 = per_node.iter().map(|x| x.operational).sum();
    Ok(PowerReport {
        tx_only,
        operational,
        total: tx_only + operational,
        window,
        per_node,
    })
}
