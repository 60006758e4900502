//! Labeled random streams derived from a per-image seed.
//!
//! Every consumer of randomness gets its own ChaCha stream keyed by the same
//! seed, so adding draws to one consumer never shifts another.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Stream labels. The numeric values are part of the reproducibility contract.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u64)]
pub enum Stream {
    /// Patch positions and patch noise for the motion field.
    Field = 1,
    /// Additive sensor noise.
    Noise = 2,
    /// Per-image parameter sampling in dataset generation.
    Params = 3,
}

/// The ChaCha8 stream for `label` under `seed`.
pub fn stream(seed: u64, label: Stream) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(label as u64);
    rng
}
