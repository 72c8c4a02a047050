//! Deterministic seed derivation.
//!
//! Every random stream in the crate is a `ChaCha8Rng` seeded from a master
//! seed plus a path of integers (run index, generation, child index, ...).
//! Streams derived from distinct paths are independent, so work may be
//! scheduled in any order without changing results.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes `path` into `seed`, one component at a time.
pub fn derive_seed(seed: u64, path: &[u64]) -> u64 {
    path.iter()
        .fold(splitmix64(seed), |acc, &p| splitmix64(acc ^ splitmix64(p)))
}

pub fn rng_for(seed: u64, path: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, path))
}

/// Stream labels used as the first path component, so that e.g. the data
/// stream of run 3 never collides with the trainer stream of run 3.
pub(crate) mod stream {
    pub const DATA: u64 = 0xDA7A;
    pub const SPLIT: u64 = 0x5917;
    pub const TRAIN: u64 = 0x7A14;
    pub const CHILD: u64 = 0xC41D;
    pub const INIT: u64 = 0x1417;
    pub const SHOTS: u64 = 0x5407;
    pub const PROBE: u64 = 0x940B;
    pub const UNITARY: u64 = 0x0417;
}
