//! Reproducible random streams.
//!
//! Every randomized operation draws from ChaCha8 seeded with the caller's
//! seed and a fixed per-operation stream id, so results are identical across
//! platforms and independent between operations sharing a seed.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

pub const STREAM_ORTHONULL: u64 = 0x6f72_7468;
pub const STREAM_G_UNITARY: u64 = 0x6775_6e69;
pub const STREAM_TRIANGLE: u64 = 0x7472_6961;

pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Standard complex gaussian (unit variance per component).
pub fn complex_normal(rng: &mut ChaCha8Rng) -> Complex64 {
    Complex64::new(normal(rng), normal(rng))
}
