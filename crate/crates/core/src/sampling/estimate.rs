use rayon::prelude::*;
use serde::Serialize;

use super::stream::CoalitionStream;
use crate::error::{BanzhafError, Result};
use crate::exact::IndexMode;
use crate::game::{AssociationMatrix, PersuasionScope, VotingGame, MAX_PLAYERS};

/// Samples per parallel block. Block boundaries never change the streams.
const BLOCK: u64 = 4096;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlayerEstimate {
    pub id: String,
    pub estimate: f64,
    pub swing_count: u64,
    /// Unbiased sample variance of the 0/1 outcomes; `None` below two samples.
    pub sample_variance: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateReport {
    pub mode: IndexMode,
    pub scope: PersuasionScope,
    pub samples: u64,
    pub seed: u64,
    pub players: Vec<PlayerEstimate>,
}

impl EstimateReport {
    pub fn estimates(&self) -> Vec<f64> {
        self.players.iter().map(|p| p.estimate).collect()
    }

    /// Estimates rescaled to sum to one (zero when every estimate is zero).
    pub fn normalized(&self) -> Vec<f64> {
        let total: u64 = self.players.iter().map(|p| p.swing_count).sum();
        self.players
            .iter()
            .map(|p| {
                if total == 0 {
                    0.0
                } else {
                    p.swing_count as f64 / total as f64
                }
            })
            .collect()
    }
}

/// Bernoulli sample variance `S^2 = s (n - s) / (n (n - 1))`.
pub fn bernoulli_sample_variance(successes: u64, n: u64) -> Option<f64> {
    if n < 2 {
        return None;
    }
    let (s, n) = (successes as f64, n as f64);
    Some(s * (n - s) / (n * (n - 1.0)))
}

/// Monte Carlo estimate of every player's index from `samples` random
/// coalitions per player.
pub fn estimate_indices(
    game: &VotingGame,
    phi: Option<&AssociationMatrix>,
    samples: u64,
    seed: u64,
) -> Result<EstimateReport> {
    estimate_indices_scoped(game, phi, samples, seed, PersuasionScope::AllPlayers)
}

pub fn estimate_indices_scoped(
    game: &VotingGame,
    phi: Option<&AssociationMatrix>,
    samples: u64,
    seed: u64,
    scope: PersuasionScope,
) -> Result<EstimateReport> {
    if samples == 0 {
        return Err(BanzhafError::InvalidParameter(
            "sample count must be at least 1".into(),
        ));
    }
    if let Some(phi) = phi {
        game.check_association(phi)?;
    }
    debug_assert!(game.players() <= MAX_PLAYERS);
    let players: Vec<PlayerEstimate> = (0..game.players())
        .into_par_iter()
        .map(|i| {
            let swing_count = count_player_swings(game, phi, scope, i, samples, seed);
            PlayerEstimate {
                id: game.player_ids()[i].clone(),
                estimate: swing_count as f64 / samples as f64,
                swing_count,
                sample_variance: bernoulli_sample_variance(swing_count, samples),
            }
        })
        .collect();
    Ok(EstimateReport {
        mode: if phi.is_some() {
            IndexMode::Association
        } else {
            IndexMode::Classical
        },
        scope,
        samples,
        seed,
        players,
    })
}

fn count_player_swings(
    game: &VotingGame,
    phi: Option<&AssociationMatrix>,
    scope: PersuasionScope,
    i: usize,
    samples: u64,
    seed: u64,
) -> u64 {
    let m = game.players();
    let k = game.dims();
    let fixed_removal: Vec<f64> = match phi {
        None => game.weight(i).to_vec(),
        Some(phi) => game.load_vector(
            phi,
            i,
            PersuasionScope::AllPlayers,
            crate::game::Coalition::EMPTY,
        ),
    };
    let blocks = samples.div_ceil(BLOCK);
    (0..blocks)
        .into_par_iter()
        .map(|b| {
            let start = b * BLOCK;
            let len = BLOCK.min(samples - start);
            let mut swings = 0u64;
            let mut sums = vec![0.0; k];
            for c in CoalitionStream::new(seed, i, m, start).take(len as usize) {
                for (d, s) in sums.iter_mut().enumerate() {
                    *s = game.coalition_weight_in(c, d);
                }
                if !game.meets_all(|d| sums[d]) {
                    continue;
                }
                let critical = match (phi, scope) {
                    (Some(phi), PersuasionScope::CoalitionMembers) => {
                        let load = game.load_vector(phi, i, scope, c);
                        !game.meets_all(|d| sums[d] - load[d])
                    }
                    _ => !game.meets_all(|d| sums[d] - fixed_removal[d]),
                };
                swings += critical as u64;
            }
            swings
        })
        .sum()
}
