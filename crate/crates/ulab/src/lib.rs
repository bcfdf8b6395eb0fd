//! Numerical laboratory for uniformity norms, arithmetic weight families,
//! closest-integer polynomial orbits, and multiple ergodic averages on
//! finite commuting systems.

pub mod arith;
pub mod averages;
pub mod constants;
pub mod error;
pub mod gowers;
pub mod polyseq;
pub mod recipe;
pub mod reduce;
pub mod systems;
pub mod uniformsets;
pub mod vdc;

pub use error::{Error, Result};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Derives an independent deterministic stream from the master seed and a
/// fixed label, so batteries never share or reorder random draws.
pub fn seeded_rng(seed: u64, label: &str) -> ChaCha8Rng {
    // FNV-1a over the label, folded into the master seed.
    let mut h: u64 = 0xcbf29ce484222325;
    for b in label.as_bytes() {
        h ^= u64::from(*b);
        h = h.wrapping_mul(0x100000001b3);
    }
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&h.to_le_bytes());
    key[16..24].copy_from_slice(&seed.rotate_left(32).to_le_bytes());
    key[24..32].copy_from_slice(&h.rotate_left(32).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}
