//! Seeded random streams.
//!
//! Every random draw in the crate comes from [`ChaCha8Rng`], which produces
//! the same sequence on every platform. A run is identified by a master seed;
//! the seed of an individual trial is derived from `(master, row, trial)` with
//! SplitMix64 mixing, and the parts of a trial that need randomness (point
//! positions, marks, routing targets) read from separate ChaCha streams of
//! that trial seed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type SimRng = ChaCha8Rng;

/// Stream used for point positions.
pub const STREAM_POINTS: u64 = 0;
/// Stream used for schedules and other per-node marks.
pub const STREAM_MARKS: u64 = 1;
/// Stream used by routing and other per-trial choices.
pub const STREAM_AUX: u64 = 2;

/// Generator for `stream` of `seed`.
pub fn stream(seed: u64, stream: u64) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for trial `trial` of sweep row `row` under `master`.
pub fn trial_seed(master: u64, row: u64, trial: u64) -> u64 {
    splitmix64(splitmix64(splitmix64(master) ^ row) ^ trial)
}
