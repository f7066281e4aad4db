//! Seeded randomness.
//!
//! Every random draw comes from `ChaCha8Rng` (a counter-based stream cipher
//! with fixed, published constants and a portable output stream). Child
//! seeds for experiment tasks are derived by folding task coordinates through
//! the SplitMix64 finalizer, so results do not depend on scheduling.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type TaskRng = ChaCha8Rng;

/// SplitMix64 output finalizer (Steele, Lea & Flood constants).
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Order-sensitive hash of a seed and task coordinates.
pub fn derive_seed(master: u64, parts: &[u64]) -> u64 {
    parts
        .iter()
        .fold(mix64(master), |acc, &p| mix64(acc ^ mix64(p)))
}

pub fn rng_from_seed(seed: u64) -> TaskRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform double in `[0, 1)` from the top 53 bits of one draw.
pub fn unit_f64(rng: &mut impl RngCore) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Number of successes in `trials` Bernoulli(`p`) draws.
pub fn binomial(rng: &mut impl RngCore, trials: u64, p: f64) -> u64 {
    let p = p.clamp(0.0, 1.0);
    (0..trials).filter(|_| unit_f64(rng) < p).count() as u64
}

/// Uniform draw in `[lo, hi)`.
pub fn uniform(rng: &mut TaskRng, lo: f64, hi: f64) -> f64 {
    rng.random_range(lo..hi)
}
