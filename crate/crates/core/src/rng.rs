//! Reproducible random streams.
//!
//! Every session draws from its own ChaCha stream derived from a master seed
//! and a session index, so parallel Monte Carlo runs give bit-identical
//! results regardless of scheduling.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// The generator used by probe sessions and oracles.
pub type WalkRng = ChaCha8Rng;

/// Stream `index` of the family rooted at `master`.
pub fn stream(master: u64, index: u64) -> WalkRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    rng.set_stream(index);
    rng
}

/// Derive a child seed from a parent generator.
pub fn child_seed<R: rand::Rng + ?Sized>(rng: &mut R) -> u64 {
    rng.next_u64()
}

/// A uniform draw from `(0, 1]` with 53 random bits.
pub(crate) fn open_closed_unit<R: rand::Rng + ?Sized>(rng: &mut R) -> f64 {
    ((rng.next_u64() >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}
