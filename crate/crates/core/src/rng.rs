//! Seeded substreams.
//!
//! Every random choice in the crate flows from one 64-bit seed through a
//! labeled substream, so adding a new consumer never perturbs existing ones.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Derives an independent generator for `(seed, label)`.
///
/// The same pair always yields the same stream; distinct labels yield
/// unrelated streams even under the same seed.
pub fn substream(seed: u64, label: &str) -> ChaCha8Rng {
    let mut hasher = Sha256::new();
    hasher.update(seed.to_le_bytes());
    hasher.update(label.as_bytes());
    let digest = hasher.finalize();
    let mut key = [0u8; 32];
    key.copy_from_slice(&digest);
    ChaCha8Rng::from_seed(key)
}

/// Substream keyed by a label and an index, for per-restart or per-repeat
/// streams.
pub fn substream_indexed(seed: u64, label: &str, index: u64) -> ChaCha8Rng {
    substream(seed, &format!("{label}#{index}"))
}
