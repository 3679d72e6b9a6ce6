//! Deterministic child-seed derivation.
//!
//! Child streams are derived by hashing the tuple of tags into a fresh seed,
//! so adding theorems or functions to a suite never perturbs the draws of
//! existing cells.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Hash an ordered tuple of tags into one 64-bit seed.
pub fn mix(parts: &[u64]) -> u64 {
    let mut acc = 0x6C62_272E_07BB_0142u64;
    for (i, &p) in parts.iter().enumerate() {
        acc = splitmix64(acc ^ splitmix64(p.wrapping_add(i as u64)));
    }
    splitmix64(acc)
}

/// FNV-1a over raw bytes; used to tag streams by stable string names.
pub const fn fnv1a(bytes: &[u8]) -> u64 {
    let mut h = 0xCBF2_9CE4_8422_2325u64;
    let mut i = 0;
    while i < bytes.len() {
        h ^= bytes[i] as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
        i += 1;
    }
    h
}

/// Independent RNG stream for the given tag tuple.
pub fn stream(parts: &[u64]) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(mix(parts))
}
