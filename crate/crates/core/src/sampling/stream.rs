//! Random coalition streams keyed by `(seed, player, sample index)`.
//!
//! Each player owns one ChaCha8 stream derived from the master seed; sample
//! `j` always consumes the 64-bit word pair at position `2j`, so a block of
//! samples can be regenerated from its starting index alone and sequential
//! and partitioned runs see the same coalitions.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::game::Coalition;

/// Random coalitions containing a fixed player, uniform over the other
/// `m - 1` players (each included independently with probability 1/2).
pub struct CoalitionStream {
    rng: ChaCha8Rng,
    player: usize,
    mask: u64,
}

impl CoalitionStream {
    /// Stream for `player` positioned at sample `start`.
    pub fn new(seed: u64, player: usize, players: usize, start: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(player as u64);
        rng.set_word_pos(u128::from(start) * 2);
        let mask = if players >= 64 {
            u64::MAX
        } else {
            (1u64 << players) - 1
        };
        CoalitionStream { rng, player, mask }
    }

    #[inline]
    pub fn next_coalition(&mut self) -> Coalition {
        let bits = self.rng.next_u64() & self.mask;
        Coalition::from_raw(bits | 1 << self.player)
    }
}

impl Iterator for CoalitionStream {
    type Item = Coalition;

    fn next(&mut self) -> Option<Coalition> {
        Some(self.next_coalition())
    }
}

/// Seed for the `index`-th derived task of a run (trials, matrices).
pub fn derived_seed(seed: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng.next_u64()
}
