/// SplitMix64 output finalizer (Steele, Lea & Flood). A bijection on `u64`.
#[inline]
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Per-image seed: `mix64(mix64(master) ^ index)`.
///
/// For a fixed master seed this is a bijection of the index, so derived seeds
/// never collide within a dataset. The function is frozen; changing it would
/// change every generated dataset.
#[inline]
pub fn derive_seed(master_seed: u64, index: u64) -> u64 {
    mix64(mix64(master_seed) ^ index)
}
