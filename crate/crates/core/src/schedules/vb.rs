//! Vertex-based random connection models.
//!
//! Each node draws one independent mark; two nodes within range connect iff
//! a symmetric predicate holds on their marks. Because the mark is shared by
//! every pair a node takes part in, edges are dependent: schedule overlap is
//! the motivating instance.

use rand::Rng;

use super::{gamma_key_predistribution, Schedule, SchemeSpec};
use crate::error::{Error, Result};

pub trait VbModel: Sync {
    type Mark: Clone + Send + Sync;

    fn sample_mark<R: Rng + ?Sized>(&self, rng: &mut R) -> Self::Mark;

    /// Symmetric connection predicate.
    fn connects(&self, a: &Self::Mark, b: &Self::Mark) -> bool;

    /// Probability that two independent marks connect.
    fn gamma(&self) -> f64;

    fn name(&self) -> String;
}

/// Evaluates the model's predicate on two marks.
pub fn vb_connect<M: VbModel>(model: &M, mark_u: &M::Mark, mark_v: &M::Mark) -> bool {
    model.connects(mark_u, mark_v)
}

/// Schedules as marks, overlap as the predicate.
impl VbModel for SchemeSpec {
    type Mark = Schedule;

    fn sample_mark<R: Rng + ?Sized>(&self, rng: &mut R) -> Schedule {
        self.sample(rng)
    }

    fn connects(&self, a: &Schedule, b: &Schedule) -> bool {
        a.overlaps_unchecked(b)
    }

    fn gamma(&self) -> f64 {
        SchemeSpec::gamma(self)
    }

    fn name(&self) -> String {
        format!(
            "{}(L={},d={})",
            self.kind().label(),
            self.slots(),
            self.awake()
        )
    }
}

/// Every in-range pair connects; the plain random geometric graph.
#[derive(Clone, Copy, Debug, Default)]
pub struct FullConnection;

impl VbModel for FullConnection {
    type Mark = ();

    fn sample_mark<R: Rng + ?Sized>(&self, _rng: &mut R) {}

    fn connects(&self, _: &(), _: &()) -> bool {
        true
    }

    fn gamma(&self) -> f64 {
        1.0
    }

    fn name(&self) -> String {
        "rgg".into()
    }
}

/// Uniform colour per node; nodes connect only when their colours differ.
///
/// With three colours no four mutually close nodes can form a clique.
#[derive(Clone, Copy, Debug)]
pub struct ColorModel {
    colors: u32,
}

impl ColorModel {
    pub const RED: u32 = 0;
    pub const GREEN: u32 = 1;
    pub const BLUE: u32 = 2;

    pub fn new(colors: u32) -> Result<Self> {
        if colors < 2 {
            return Err(Error::invalid("colour model needs at least two colours"));
        }
        Ok(ColorModel { colors })
    }

    pub fn three() -> Self {
        ColorModel { colors: 3 }
    }

    pub fn colors(&self) -> u32 {
        self.colors
    }
}

impl VbModel for ColorModel {
    type Mark = u32;

    fn sample_mark<R: Rng + ?Sized>(&self, rng: &mut R) -> u32 {
        rng.random_range(0..self.colors)
    }

    fn connects(&self, a: &u32, b: &u32) -> bool {
        a != b
    }

    fn gamma(&self) -> f64 {
        1.0 - 1.0 / self.colors as f64
    }

    fn name(&self) -> String {
        format!("color(k={})", self.colors)
    }
}

/// Random key predistribution: each node holds `ring` distinct keys from a
/// pool of `pool`; nodes connect when they share a key.
#[derive(Clone, Copy, Debug)]
pub struct KeyPredistribution {
    pool: usize,
    ring: usize,
}

impl KeyPredistribution {
    pub fn new(pool: usize, ring: usize) -> Result<Self> {
        gamma_key_predistribution(pool, ring)?;
        Ok(KeyPredistribution { pool, ring })
    }
}

impl VbModel for KeyPredistribution {
    // key ring as a bitmap over the pool
    type Mark = Schedule;

    fn sample_mark<R: Rng + ?Sized>(&self, rng: &mut R) -> Schedule {
        super::gen_random_selection(self.pool, self.ring, rng).expect("validated at construction")
    }

    fn connects(&self, a: &Schedule, b: &Schedule) -> bool {
        a.overlaps_unchecked(b)
    }

    fn gamma(&self) -> f64 {
        gamma_key_predistribution(self.pool, self.ring).unwrap()
    }

    fn name(&self) -> String {
        format!("keys(P={},K={})", self.pool, self.ring)
    }
}
