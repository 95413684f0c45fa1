//! Counter-based pseudo-random streams.
//!
//! Every random quantity in this crate is a pure function of a 64-bit seed and
//! a draw index, obtained from the SplitMix64 output function:
//!
//! ```text
//! stream(seed, i) = mix64(seed + (i + 1) * 0x9E3779B97F4A7C15)
//! ```
//!
//! where `mix64` is the SplitMix64 finalizer. Streams are therefore
//! reproducible, splittable (derive a child seed with [`derive_seed`]) and
//! random-access: draw `i` never depends on draw `i - 1`.

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer: a 64-bit bijective mixing function.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// The `index`-th 64-bit word of the stream identified by `seed`.
#[inline]
pub fn stream_u64(seed: u64, index: u64) -> u64 {
    mix64(seed.wrapping_add(GOLDEN_GAMMA.wrapping_mul(index.wrapping_add(1))))
}

/// Child seed `k` of a master seed, for parallel replicates.
#[inline]
pub fn derive_seed(master: u64, k: u64) -> u64 {
    stream_u64(master, k)
}

/// Map a 64-bit word to the open interval (0, 1).
///
/// Uses the top 53 bits plus a half-ulp offset so neither endpoint is
/// attainable.
#[inline]
pub fn unit_uniform(bits: u64) -> f64 {
    ((bits >> 11) as f64 + 0.5) * (1.0 / 9_007_199_254_740_992.0)
}

/// Draw `index` of the uniform(0,1) stream identified by `seed`.
#[inline]
pub fn uniform_draw(seed: u64, index: u64) -> f64 {
    unit_uniform(stream_u64(seed, index))
}
