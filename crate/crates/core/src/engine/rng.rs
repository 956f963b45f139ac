//! Deterministic substream derivation.
//!
//! One root seed; every (iteration, user, purpose) triple gets its own
//! counter-keyed ChaCha stream, so iterations can run on any number of
//! workers without changing a single drawn value.

use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StreamPurpose {
    /// The per-user Bernoulli transmit decision.
    Activity = 1,
    /// The user's payload bits.
    Payload = 2,
    /// Channel noise for the superposed signal.
    Noise = 3,
}

/// An independent random stream keyed on (seed, iteration, user, purpose).
pub fn substream(seed: u64, iteration: u64, user: u64, purpose: StreamPurpose) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[0..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&iteration.to_le_bytes());
    key[16..24].copy_from_slice(&user.to_le_bytes());
    key[24..32].copy_from_slice(&(purpose as u64).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}
