//! Seeded, splittable random number generation.
//!
//! Every stochastic draw in the simulator (symbols, phase increments,
//! additive noise, power probe) consumes its own ChaCha substream, so
//! changing one noise source never perturbs the others and method
//! comparisons stay variance-paired.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Substream identifiers used by the chain simulator.
pub mod stream {
    pub const SYMBOLS: u64 = 0;
    pub const PHASE: u64 = 1;
    pub const NOISE: u64 = 2;
    pub const PROBE: u64 = 3;
}

/// Independent generator for (`seed`, `stream`).
pub fn substream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Deterministic per-cell seed for Monte Carlo grids, derived from a master
/// seed and two indices (SplitMix64 finalizer chain).
pub fn derive_seed(master: u64, a: u64, b: u64) -> u64 {
    splitmix(splitmix(splitmix(master).wrapping_add(a)).wrapping_add(b))
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
