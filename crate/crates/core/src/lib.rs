//! Simulation toolkit for connectivity of duty-cycled wireless sensor networks.
//!
//! Sensors are dropped uniformly in the unit disk, each one wakes according
//! to a periodic schedule, and two sensors can talk when they are within the
//! transmission radius *and* share an awake slot. The crate provides:
//!
//! * [`geometry`]: deployments and a kd-tree for fixed-radius queries,
//! * [`schedules`]: wake schedules, pairwise connection probabilities and the
//!   general vertex-based random connection model,
//! * [`radii`]: closed-form connectivity radii,
//! * [`graph`]: duty-cycled graph construction and component analytics,
//! * [`routing`] and [`power`]: a slot-synchronous `Send(M, S, D)` flood and
//!   its energy accounting,
//! * [`detsched`]: randomized search for schedule families that connect at
//!   the plain RGG radius,
//! * [`experiments`]: the batch harness behind the `dcwsn` CLI.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod detsched;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod graph;
pub mod power;
pub mod radii;
pub mod rng;
pub mod routing;
pub mod schedules;
pub mod stats;

pub use error::{Error, Result};
