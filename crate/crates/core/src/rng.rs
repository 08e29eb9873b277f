//! Reproducible RNG streams.
//!
//! One master seed drives an entire sweep. Per-instance seeds come from a
//! counter-based splitmix of (master, cell index, sample index), so results
//! are independent of execution order. Within an instance, disjoint ChaCha
//! streams separate circuit sampling, measurement outcomes, and estimator
//! draws: two backends replaying the same instance consume identical
//! measurement draws.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Purpose-separated streams of a single instance seed.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Stream {
    /// Gate matrices and measurement layouts.
    Circuit = 0,
    /// Born-rule measurement outcomes (shared across backends).
    Measurement = 1,
    /// Monte Carlo estimators: stabilizer-group samples, mirror shots.
    Estimator = 2,
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    let mut z = x;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Instance seed for a (cell, sample) coordinate under a master seed.
pub fn derive_seed(master: u64, cell: u64, sample: u64) -> u64 {
    let a = splitmix64(master ^ splitmix64(cell.wrapping_mul(0xa076_1d64_78bd_642f)));
    splitmix64(a ^ splitmix64(sample.wrapping_mul(0xe703_7ed1_a0b4_28db)))
}

/// ChaCha stream for one purpose of one instance.
pub fn instance_rng(instance_seed: u64, stream: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(instance_seed);
    rng.set_stream(stream as u64);
    rng
}
