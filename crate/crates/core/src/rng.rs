//! Per-actor randomness streams.
//!
//! Every actor (source, worker, sampler) draws from its own ChaCha20 stream
//! keyed by `SHA-256(run seed, actor, round)`, so streams are independent
//! and a run is reproducible from its seed alone.

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use sha2::{Digest, Sha256};

use crate::transcript::Actor;

const DOMAIN: &[u8] = b"polyshare/rng/v1";

fn derive_key(seed: u64, tag: &[u8], a: u64, b: u64) -> [u8; 32] {
    let mut h = Sha256::new();
    h.update(DOMAIN);
    h.update(seed.to_le_bytes());
    h.update((tag.len() as u64).to_le_bytes());
    h.update(tag);
    h.update(a.to_le_bytes());
    h.update(b.to_le_bytes());
    let digest = h.finalize();
    let mut key = [0u8; 32];
    key.copy_from_slice(&digest);
    key
}

/// Stream for `actor` in protocol round `round`.
pub fn actor_stream(seed: u64, actor: Actor, round: u32) -> ChaCha20Rng {
    let (tag, id): (&[u8], u64) = match actor {
        Actor::Source(g) => (b"source", g as u64),
        Actor::Worker(n) => (b"worker", n as u64),
        Actor::Master => (b"master", 0),
    };
    ChaCha20Rng::from_seed(derive_key(seed, tag, id, round as u64))
}

/// Stream for a named purpose (point sampling, audit trials, test inputs).
pub fn purpose_stream(seed: u64, purpose: &str, index: u64) -> ChaCha20Rng {
    ChaCha20Rng::from_seed(derive_key(seed, purpose.as_bytes(), index, 0))
}

/// Derives a child seed, e.g. one per audit trial.
pub fn child_seed(seed: u64, purpose: &str, index: u64) -> u64 {
    let key = derive_key(seed, purpose.as_bytes(), index, 1);
    u64::from_le_bytes(key[..8].try_into().expect("8 bytes"))
}
