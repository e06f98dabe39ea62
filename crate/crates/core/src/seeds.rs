//! Deterministic seed derivation.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// One step of the SplitMix64 generator, used as a 64-bit mixing function.
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of trial `index` in a run seeded with `seed`; independent of how
/// trials are scheduled across threads.
pub fn trial_seed(seed: u64, index: u64) -> u64 {
    splitmix64(seed ^ index)
}

pub fn trial_rng(seed: u64, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(seed, index))
}

/// Folds a sequence of words into one seed.
pub fn mix_words(words: impl IntoIterator<Item = u64>) -> u64 {
    words.into_iter().fold(0x5EED_u64, |h, w| splitmix64(h ^ w))
}
