//! Canonical state serialization for replay and determinism checks.
//!
//! The encoding is JSON with struct-declaration field order and no maps keyed
//! by hashing, so equal states always produce equal bytes.

use sha2::{Digest, Sha256};
use thiserror::Error;

use super::state::GameState;

#[derive(Debug, Error)]
#[error("malformed state snapshot: {0}")]
pub struct SnapshotError(#[from] serde_json::Error);

pub fn snapshot(state: &GameState) -> Vec<u8> {
    serde_json::to_vec(state).expect("game state serializes")
}

pub fn restore(bytes: &[u8]) -> Result<GameState, SnapshotError> {
    Ok(serde_json::from_slice(bytes)?)
}

/// Hex SHA-256 of the canonical snapshot.
pub fn state_hash(state: &GameState) -> String {
    hex::encode(Sha256::digest(snapshot(state)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::env::{init_game, GameConfig, Layout};
    use rand::RngCore;

    #[test]
    fn round_trip_and_rng_sensitivity() {
        let s = init_game(&Layout::counter_circuit(), &GameConfig::default(), 7);
        let back = restore(&snapshot(&s)).unwrap();
        assert_eq!(back, s);
        assert_eq!(snapshot(&back), snapshot(&s));

        let mut t = s.clone();
        t.rng.next_u32();
        assert_ne!(snapshot(&s), snapshot(&t));
    }

    #[test]
    fn malformed_bytes_fail_to_decode() {
        assert!(restore(b"{not json").is_err());
    }
}
