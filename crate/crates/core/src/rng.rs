//! Seed derivation for independent, reproducible random streams.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Rng = ChaCha8Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a base seed with a sequence of tags (iteration, player, purpose...)
/// into a new seed. Distinct tag sequences give unrelated streams.
pub fn derive_seed(base: u64, tags: &[u64]) -> u64 {
    tags.iter()
        .fold(splitmix64(base), |acc, &t| splitmix64(acc ^ splitmix64(t)))
}

pub fn rng_from_seed(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Samples an index from a probability vector. Falls back to the last index
/// with positive mass when rounding leaves the cumulative sum short of `u`.
pub fn sample_index<R: rand::Rng + ?Sized>(rng: &mut R, probs: &[f64]) -> usize {
    let u: f64 = rng.random();
    let mut acc = 0.0;
    let mut last = 0;
    for (i, &p) in probs.iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last = i;
            if u < acc {
                return i;
            }
        }
    }
    last
}

/// Purpose tags used when deriving per-unit seeds.
pub mod purpose {
    pub const INITIAL: u64 = 1;
    pub const INIT: u64 = 2;
    pub const ORACLE: u64 = 3;
    pub const PAYOFF: u64 = 4;
    pub const APPROX: u64 = 5;
    pub const KL_PROBE: u64 = 6;
    pub const HULL: u64 = 7;
}
