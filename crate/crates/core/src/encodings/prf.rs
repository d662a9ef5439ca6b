//! Counter-based pseudo-random function.
//!
//! Every random quantity in an encoding is addressed by `(seed, stream, index)`
//! and produced by hashing that triple, so any component at any point can be
//! realized without tables or generator state.

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Stateless 64-bit pseudo-random function of `(seed, stream, index)`.
#[inline]
pub fn prf(seed: u64, stream: u64, index: u64) -> u64 {
    let h = mix64(seed.wrapping_add(GOLDEN));
    let h = mix64(h ^ stream.wrapping_mul(GOLDEN).wrapping_add(0x632B_E59B_D9B4_E019));
    mix64(h ^ index.wrapping_mul(0xD1B5_4A32_D192_ED03).wrapping_add(GOLDEN))
}

/// Derives an independent sub-seed for a named purpose.
#[inline]
pub fn derive_seed(seed: u64, tag: u64) -> u64 {
    prf(seed, u64::MAX, tag)
}

/// Maps the top bit to `±1.0`.
#[inline]
pub fn rademacher(bits: u64) -> f64 {
    if bits >> 63 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Uniform draw strictly inside `(0, 1)` from the top 53 bits.
#[inline]
pub fn unit_open(bits: u64) -> f64 {
    ((bits >> 12) as f64 + 0.5) * (1.0 / (1u64 << 52) as f64)
}
