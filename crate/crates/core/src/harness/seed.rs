//! Counter-derived seeds so every (scheme, SNR point, trial, stream) gets an
//! independent, reproducible generator.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn derive_seed(master: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(mix64(master), |acc, &p| {
        mix64(acc.wrapping_add(GOLDEN_GAMMA).wrapping_add(mix64(p)))
    })
}

/// Stream tags within one point.
pub(crate) const STREAM_SOURCE: u64 = 1;
pub(crate) const STREAM_NOISE: u64 = 2;
