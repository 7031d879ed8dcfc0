//! Counter-based seed derivation.
//!
//! A child seed is obtained by folding each coordinate into the parent with
//! the SplitMix64 finalizer:
//!
//! ```text
//! h = mix(parent ^ 0x9E3779B97F4A7C15)
//! for c in coords: h = mix(h ^ mix(c + 0x9E3779B97F4A7C15))
//! ```
//!
//! The function is pure, so a layer's or replicate's stream depends only on
//! the base seed and its coordinates, never on evaluation order.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// The SplitMix64 output function.
pub fn mix(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

pub fn child(parent: u64, coords: &[u64]) -> u64 {
    coords.iter().fold(mix(parent ^ GOLDEN), |h, &c| {
        mix(h ^ mix(c.wrapping_add(GOLDEN)))
    })
}
