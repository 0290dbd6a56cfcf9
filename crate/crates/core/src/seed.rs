//! Stable seed derivation.
//!
//! Every random stream in the pipeline (splits, forest bootstraps, NDW
//! sampling) is seeded from the global seed mixed with the names of the
//! cell it belongs to, so serial and parallel runs draw identical numbers.

/// FNV-1a over the bytes of `s`.
pub fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// SplitMix64 finaliser.
pub fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Derives a child seed from `seed` and an ordered list of path components.
pub fn derive(seed: u64, parts: &[&str]) -> u64 {
    parts
        .iter()
        .fold(mix(seed), |acc, p| mix(acc ^ fnv1a(p)))
}
