//! Seeded random streams. Replicate `r` of a run seeded with `s` always reads
//! the ChaCha8 stream `(s, r)`, so results do not depend on scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn replicate_rng(seed: u64, replicate: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(replicate);
    rng
}

/// Independent Bernoulli(`p`) coin per cluster.
#[inline]
pub fn draw_coins<R: Rng>(rng: &mut R, p: f64, coins: &mut [bool]) {
    for c in coins.iter_mut() {
        *c = rng.gen::<f64>() < p;
    }
}

/// SplitMix64 finalizer; used to derive per-cell seeds from a base seed.
pub fn mix_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
