//! Duty-cycle schedules and the schemes that generate them.
//!
//! A [`Schedule`] is the wake register of one sensor: `L` slots per cycle, of
//! which exactly `d` are awake. Two sensors in range can exchange a message
//! only when their registers share a set bit.

mod gamma;
mod support;
mod vb;

use std::fmt;
use std::io::{BufRead, Write};

use rand::Rng;

use crate::error::{Error, Result};

pub use gamma::{
    gamma_contiguous, gamma_empirical, gamma_key_predistribution, gamma_random, gamma_random_exact,
    triangle_prob_contiguous,
};
pub use support::{
    check_reachability, check_time_coverage, CoverageReport, Reachability, SupportGraph,
};
pub use vb::{vb_connect, ColorModel, FullConnection, KeyPredistribution, VbModel};

const WORD: usize = 64;

/// Awake slots of one sensor, packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Schedule {
    slots: u32,
    awake: u32,
    words: Box<[u64]>,
}

impl fmt::Debug for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Schedule")
            .field("L", &self.slots)
            .field("d", &self.awake)
            .field("awake", &self.awake_slots().collect::<Vec<_>>())
            .finish()
    }
}

fn check_shape(slots: usize, awake: usize) -> Result<()> {
    if slots == 0 || slots > u32::MAX as usize {
        return Err(Error::invalid(format!(
            "cycle length must be positive, got {slots}"
        )));
    }
    if awake == 0 || awake > slots {
        return Err(Error::invalid(format!(
            "awake slots must satisfy 1 <= d <= L, got d={awake}, L={slots}"
        )));
    }
    Ok(())
}

impl Schedule {
    fn empty(slots: usize) -> Self {
        Schedule {
            slots: slots as u32,
            awake: 0,
            words: vec![0; slots.div_ceil(WORD)].into_boxed_slice(),
        }
    }

    fn set(&mut self, k: usize) {
        let (w, b) = (k / WORD, k % WORD);
        if self.words[w] & (1 << b) == 0 {
            self.words[w] |= 1 << b;
            self.awake += 1;
        }
    }

    /// Schedule awake exactly in `awake_slots`.
    pub fn from_slots(slots: usize, awake_slots: &[usize]) -> Result<Self> {
        check_shape(slots, awake_slots.len())?;
        let mut s = Self::empty(slots);
        for &k in awake_slots {
            if k >= slots {
                return Err(Error::invalid(format!(
                    "slot {k} out of range for L={slots}"
                )));
            }
            s.set(k);
        }
        if s.awake as usize != awake_slots.len() {
            return Err(Error::invalid("duplicate awake slot"));
        }
        Ok(s)
    }

    /// Awake for `awake` consecutive slots starting at `start`, wrapping mod `slots`.
    pub fn contiguous_from(slots: usize, awake: usize, start: usize) -> Result<Self> {
        check_shape(slots, awake)?;
        let mut s = Self::empty(slots);
        for i in 0..awake {
            s.set((start + i) % slots);
        }
        Ok(s)
    }

    pub fn all_awake(slots: usize) -> Result<Self> {
        Self::contiguous_from(slots, slots, 0)
    }

    /// Cycle length `L`.
    pub fn slots(&self) -> usize {
        self.slots as usize
    }

    /// Awake slots per cycle `d`.
    pub fn awake(&self) -> usize {
        self.awake as usize
    }

    pub fn delta(&self) -> f64 {
        self.awake as f64 / self.slots as f64
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn is_awake(&self, slot: usize) -> bool {
        self.words[slot / WORD] >> (slot % WORD) & 1 == 1
    }

    pub fn awake_slots(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.slots()).filter(move |&k| self.is_awake(k))
    }

    /// Whether the two registers share an awake slot.
    pub fn overlaps(&self, other: &Schedule) -> Result<bool> {
        if self.slots != other.slots {
            return Err(Error::invalid(format!(
                "cycle lengths differ: {} vs {}",
                self.slots, other.slots
            )));
        }
        Ok(self.overlaps_unchecked(other))
    }

    /// [`Self::overlaps`] without the length check; caller guarantees equal `L`.
    #[inline]
    pub fn overlaps_unchecked(&self, other: &Schedule) -> bool {
        debug_assert_eq!(self.slots, other.slots);
        self.words
            .iter()
            .zip(other.words.iter())
            .any(|(a, b)| a & b != 0)
    }

    /// Number of maximal runs of awake slots on the cycle (0 when always awake).
    pub fn awake_runs(&self) -> usize {
        if self.awake == self.slots {
            return 0;
        }
        let l = self.slots();
        (0..l)
            .filter(|&k| self.is_awake(k) && !self.is_awake((k + l - 1) % l))
            .count()
    }

    /// Sleep/wake switches per cycle.
    pub fn transitions_per_cycle(&self) -> usize {
        2 * self.awake_runs()
    }

    /// Same schedule with `slot` put to sleep.
    pub fn without_slot(&self, slot: usize) -> Result<Schedule> {
        if slot >= self.slots() {
            return Err(Error::invalid(format!("slot {slot} out of range")));
        }
        let kept: Vec<usize> = self.awake_slots().filter(|&k| k != slot).collect();
        Schedule::from_slots(self.slots(), &kept)
    }

    /// Lowercase hex of the little-endian bitmap; slot `k` is bit `k % 8` of byte `k / 8`.
    pub fn to_hex(&self) -> String {
        let nbytes = self.slots().div_ceil(8);
        let bytes: Vec<u8> = (0..nbytes)
            .map(|i| (self.words[i / 8] >> (8 * (i % 8))) as u8)
            .collect();
        hex::encode(bytes)
    }

    pub fn from_hex(slots: usize, text: &str) -> Result<Self> {
        let bytes =
            hex::decode(text.trim()).map_err(|e| Error::Parse(format!("bad bitmap: {e}")))?;
        if bytes.len() != slots.div_ceil(8) {
            return Err(Error::Parse(format!(
                "bitmap has {} bytes, L={slots} needs {}",
                bytes.len(),
                slots.div_ceil(8)
            )));
        }
        let awake: Vec<usize> = (0..bytes.len() * 8)
            .filter(|&k| bytes[k / 8] >> (k % 8) & 1 == 1)
            .collect();
        if awake.iter().any(|&k| k >= slots) {
            return Err(Error::Parse("bitmap sets slots beyond L".into()));
        }
        Schedule::from_slots(slots, &awake)
    }
}

/// Writes schedules sharing one shape as an `L,d` header, its values, and one
/// hex bitmap per line.
pub fn write_schedules<W: Write>(mut w: W, schedules: &[Schedule]) -> Result<()> {
    let first = schedules
        .first()
        .ok_or_else(|| Error::invalid("no schedules to write"))?;
    if schedules
        .iter()
        .any(|s| s.slots != first.slots || s.awake != first.awake)
    {
        return Err(Error::invalid("schedules must share L and d"));
    }
    let io = |e| Error::io("<schedule writer>", e);
    writeln!(w, "L,d").map_err(io)?;
    writeln!(w, "{},{}", first.slots, first.awake).map_err(io)?;
    for s in schedules {
        writeln!(w, "{}", s.to_hex()).map_err(io)?;
    }
    Ok(())
}

pub fn read_schedules<R: BufRead>(r: R) -> Result<Vec<Schedule>> {
    let mut lines = r
        .lines()
        .map(|l| l.map_err(|e| Error::Parse(e.to_string())));
    if lines.next().transpose()?.as_deref().map(str::trim) != Some("L,d") {
        return Err(Error::Parse("expected `L,d` header".into()));
    }
    let shape = lines
        .next()
        .transpose()?
        .ok_or_else(|| Error::Parse("missing L,d values".into()))?;
    let (l, d) = shape
        .trim()
        .split_once(',')
        .and_then(|(l, d)| Some((l.parse::<usize>().ok()?, d.parse::<usize>().ok()?)))
        .ok_or_else(|| Error::Parse(format!("bad shape line `{shape}`")))?;
    let mut out = Vec::new();
    for line in lines {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let s = Schedule::from_hex(l, &line)?;
        if s.awake() != d {
            return Err(Error::Parse(format!(
                "bitmap `{line}` has {} awake slots, expected {d}",
                s.awake()
            )));
        }
        out.push(s);
    }
    Ok(out)
}

/// Contiguous scheme: a uniform start slot, then `d` consecutive awake slots.
pub fn gen_contiguous<R: Rng + ?Sized>(
    slots: usize,
    awake: usize,
    rng: &mut R,
) -> Result<Schedule> {
    check_shape(slots, awake)?;
    Schedule::contiguous_from(slots, awake, rng.random_range(0..slots))
}

/// Random-selection scheme: a uniform `d`-subset of the `L` slots.
pub fn gen_random_selection<R: Rng + ?Sized>(
    slots: usize,
    awake: usize,
    rng: &mut R,
) -> Result<Schedule> {
    check_shape(slots, awake)?;
    let mut s = Schedule::empty(slots);
    for k in rand::seq::index::sample(rng, slots, awake) {
        s.set(k);
    }
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    Contiguous,
    RandomSelection,
    DeterministicFamily,
    CustomVB,
}

impl SchemeKind {
    pub fn label(&self) -> &'static str {
        match self {
            SchemeKind::Contiguous => "dc-c",
            SchemeKind::RandomSelection => "dc-r",
            SchemeKind::DeterministicFamily => "family",
            SchemeKind::CustomVB => "custom",
        }
    }
}

/// A duty-cycle scheme: how each sensor picks its schedule.
#[derive(Clone, Debug, PartialEq)]
pub enum SchemeSpec {
    Contiguous {
        slots: usize,
        awake: usize,
    },
    RandomSelection {
        slots: usize,
        awake: usize,
    },
    /// Uniform choice among predefined options.
    DeterministicFamily {
        options: Vec<Schedule>,
    },
    /// Weighted choice among explicit options.
    Custom {
        options: Vec<Schedule>,
        weights: Vec<f64>,
    },
}

impl SchemeSpec {
    pub fn contiguous(slots: usize, awake: usize) -> Result<Self> {
        check_shape(slots, awake)?;
        Ok(SchemeSpec::Contiguous { slots, awake })
    }

    pub fn random_selection(slots: usize, awake: usize) -> Result<Self> {
        check_shape(slots, awake)?;
        Ok(SchemeSpec::RandomSelection { slots, awake })
    }

    pub fn family(options: Vec<Schedule>) -> Result<Self> {
        Self::validate_options(&options)?;
        Ok(SchemeSpec::DeterministicFamily { options })
    }

    pub fn custom(options: Vec<Schedule>, weights: Vec<f64>) -> Result<Self> {
        Self::validate_options(&options)?;
        if weights.len() != options.len() || weights.iter().any(|w| !(*w >= 0.0)) {
            return Err(Error::invalid("need one nonnegative weight per option"));
        }
        let total: f64 = weights.iter().sum();
        if !(total > 0.0) {
            return Err(Error::invalid("weights must not all be zero"));
        }
        let weights = weights.iter().map(|w| w / total).collect();
        Ok(SchemeSpec::Custom { options, weights })
    }

    fn validate_options(options: &[Schedule]) -> Result<()> {
        let first = options
            .first()
            .ok_or_else(|| Error::invalid("scheme needs at least one schedule"))?;
        if options
            .iter()
            .any(|s| s.slots != first.slots || s.awake != first.awake)
        {
            return Err(Error::invalid("all options must share L and d"));
        }
        Ok(())
    }

    pub fn kind(&self) -> SchemeKind {
        match self {
            SchemeSpec::Contiguous { .. } => SchemeKind::Contiguous,
            SchemeSpec::RandomSelection { .. } => SchemeKind::RandomSelection,
            SchemeSpec::DeterministicFamily { .. } => SchemeKind::DeterministicFamily,
            SchemeSpec::Custom { .. } => SchemeKind::CustomVB,
        }
    }

    pub fn slots(&self) -> usize {
        match self {
            SchemeSpec::Contiguous { slots, .. } | SchemeSpec::RandomSelection { slots, .. } => {
                *slots
            }
            SchemeSpec::DeterministicFamily { options } | SchemeSpec::Custom { options, .. } => {
                options[0].slots()
            }
        }
    }

    pub fn awake(&self) -> usize {
        match self {
            SchemeSpec::Contiguous { awake, .. } | SchemeSpec::RandomSelection { awake, .. } => {
                *awake
            }
            SchemeSpec::DeterministicFamily { options } | SchemeSpec::Custom { options, .. } => {
                options[0].awake()
            }
        }
    }

    /// Duty ratio `δ = d / L`.
    pub fn delta(&self) -> f64 {
        self.awake() as f64 / self.slots() as f64
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Schedule {
        match self {
            SchemeSpec::Contiguous { slots, awake } => {
                gen_contiguous(*slots, *awake, rng).expect("shape validated at construction")
            }
            SchemeSpec::RandomSelection { slots, awake } => {
                gen_random_selection(*slots, *awake, rng).expect("shape validated at construction")
            }
            SchemeSpec::DeterministicFamily { options } => {
                options[rng.random_range(0..options.len())].clone()
            }
            SchemeSpec::Custom { options, weights } => {
                let mut u = rng.random::<f64>();
                for (s, w) in options.iter().zip(weights) {
                    if u < *w {
                        return s.clone();
                    }
                    u -= w;
                }
                options.last().unwrap().clone()
            }
        }
    }

    /// One schedule per node.
    pub fn assign<R: Rng + ?Sized>(&self, nodes: usize, rng: &mut R) -> Vec<Schedule> {
        (0..nodes).map(|_| self.sample(rng)).collect()
    }

    /// Probability `δ_k` that a sensor is awake in slot `k`.
    pub fn slot_probabilities(&self) -> Vec<f64> {
        match self {
            SchemeSpec::Contiguous { slots, .. } | SchemeSpec::RandomSelection { slots, .. } => {
                vec![self.delta(); *slots]
            }
            SchemeSpec::DeterministicFamily { options } => {
                let w = vec![1.0 / options.len() as f64; options.len()];
                weighted_coverage(options, &w)
            }
            SchemeSpec::Custom { options, weights } => weighted_coverage(options, weights),
        }
    }

    /// Smallest per-slot wake probability.
    pub fn delta_min(&self) -> f64 {
        self.slot_probabilities()
            .into_iter()
            .fold(f64::INFINITY, f64::min)
    }

    /// Probability that two independently chosen schedules overlap.
    ///
    /// Contiguous and random selection use their closed forms (the latter is
    /// the working value `1 - (1 - δ)^d`); explicit option lists are summed
    /// exactly over pairs.
    pub fn gamma(&self) -> f64 {
        match self {
            SchemeSpec::Contiguous { slots, awake } => gamma_contiguous(*awake, *slots).unwrap(),
            SchemeSpec::RandomSelection { slots, awake } => gamma_random(*awake, *slots).unwrap(),
            SchemeSpec::DeterministicFamily { options } => {
                let w = vec![1.0 / options.len() as f64; options.len()];
                pairwise_overlap_probability(options, &w)
            }
            SchemeSpec::Custom { options, weights } => {
                pairwise_overlap_probability(options, weights)
            }
        }
    }
}

fn weighted_coverage(options: &[Schedule], weights: &[f64]) -> Vec<f64> {
    let mut p = vec![0.0; options[0].slots()];
    for (s, w) in options.iter().zip(weights) {
        for k in s.awake_slots() {
            p[k] += w;
        }
    }
    p
}

fn pairwise_overlap_probability(options: &[Schedule], weights: &[f64]) -> f64 {
    let mut total = 0.0;
    for (a, wa) in options.iter().zip(weights) {
        for (b, wb) in options.iter().zip(weights) {
            if a.overlaps_unchecked(b) {
                total += wa * wb;
            }
        }
    }
    total.min(1.0)
}
