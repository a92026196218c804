//! Portable seed derivation.
//!
//! Seeds are combined with the SplitMix64 finalizer so third parties can
//! reproduce any bracket: `derive(base, parts)` folds each part in as
//! `h = mix(h ^ mix(part + 0x9e3779b97f4a7c15))`, starting from
//! `h = mix(base)`.

pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

pub fn derive(base: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(mix(base), |h, &p| mix(h ^ mix(p.wrapping_add(0x9e37_79b9_7f4a_7c15))))
}

/// Seed of the agent in `seat_index` for a match seeded with `match_seed`.
pub fn agent_seed(match_seed: u64, seat_index: usize) -> u64 {
    derive(match_seed, &[0xa9e7, seat_index as u64])
}
