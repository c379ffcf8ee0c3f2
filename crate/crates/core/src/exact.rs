//! Exact indices by enumerating every coalition that contains each player.
//!
//! Each player gets its own pass over the `2^(m-1)` coalitions containing it;
//! the pass is split into fixed-size chunks that run in parallel and merge
//! with integer addition, so results do not depend on the worker count.
//! Coalition weights come from a split subset-sum table (low half and high
//! half of the bitmask), which keeps the per-coalition cost O(k) and the
//! floating-point sum for a given coalition identical across every pass.

use log::warn;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{BanzhafError, Result};
use crate::game::{AssociationMatrix, Coalition, PersuasionScope, VotingGame};

/// Hard cap on players for exhaustive enumeration.
pub const MAX_EXACT_PLAYERS: usize = 32;
/// Player count from which enumeration is logged as slow.
pub const SLOW_EXACT_PLAYERS: usize = 26;

const CHUNK_BITS: u32 = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexMode {
    Classical,
    Association,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlayerIndex {
    pub id: String,
    pub swing_count: u64,
    pub absolute: f64,
    pub normalized: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct IndexReport {
    pub mode: IndexMode,
    pub scope: PersuasionScope,
    /// `2^(m-1)`, the number of coalitions containing any one player.
    pub coalitions_per_player: u64,
    pub total_swings: u64,
    pub players: Vec<PlayerIndex>,
}

impl IndexReport {
    fn from_counts(
        game: &VotingGame,
        mode: IndexMode,
        scope: PersuasionScope,
        counts: Vec<u64>,
    ) -> Self {
        let per_player = 1u64 << (game.players() - 1);
        let total: u64 = counts.iter().sum();
        let players = counts
            .into_iter()
            .zip(game.player_ids())
            .map(|(swing_count, id)| PlayerIndex {
                id: id.clone(),
                swing_count,
                absolute: swing_count as f64 / per_player as f64,
                normalized: if total == 0 {
                    0.0
                } else {
                    swing_count as f64 / total as f64
                },
            })
            .collect();
        IndexReport {
            mode,
            scope,
            coalitions_per_player: per_player,
            total_swings: total,
            players,
        }
    }

    pub fn swing_counts(&self) -> Vec<u64> {
        self.players.iter().map(|p| p.swing_count).collect()
    }

    pub fn absolute(&self) -> Vec<f64> {
        self.players.iter().map(|p| p.absolute).collect()
    }

    pub fn normalized(&self) -> Vec<f64> {
        self.players.iter().map(|p| p.normalized).collect()
    }
}

/// Subset sums of one weight column via a low/high split of the bitmask.
pub(crate) struct SubsetSums {
    low_bits: u32,
    low_mask: u64,
    low: Vec<f64>,
    high: Vec<f64>,
}

impl SubsetSums {
    pub(crate) fn new(column: &[f64]) -> Self {
        let m = column.len();
        let low_bits = (m / 2) as u32;
        let table = |part: &[f64]| {
            let mut t = vec![0.0; 1usize << part.len()];
            for c in 1..t.len() {
                let lowest = c.trailing_zeros() as usize;
                t[c] = t[c & (c - 1)] + part[lowest];
            }
            t
        };
        SubsetSums {
            low_bits,
            low_mask: (1u64 << low_bits) - 1,
            low: table(&column[..low_bits as usize]),
            high: table(&column[low_bits as usize..]),
        }
    }

    #[inline]
    pub(crate) fn get(&self, c: u64) -> f64 {
        self.low[(c & self.low_mask) as usize] + self.high[(c >> self.low_bits) as usize]
    }
}

pub(crate) fn column_sums(game: &VotingGame) -> Vec<SubsetSums> {
    (0..game.dims())
        .map(|d| {
            let col: Vec<f64> = (0..game.players()).map(|i| game.weight(i)[d]).collect();
            SubsetSums::new(&col)
        })
        .collect()
}

/// Spreads the `m - 1` bits of `rest` around a forced bit at `player`.
#[inline]
pub(crate) fn insert_player(rest: u64, player: usize) -> u64 {
    let low = rest & ((1u64 << player) - 1);
    ((rest >> player) << (player + 1)) | (1 << player) | low
}

fn check_exact_size(game: &VotingGame) -> Result<()> {
    let m = game.players();
    if m > MAX_EXACT_PLAYERS {
        return Err(BanzhafError::TooManyPlayers {
            what: "exact enumeration",
            players: m,
            limit: MAX_EXACT_PLAYERS,
        });
    }
    if m >= SLOW_EXACT_PLAYERS {
        warn!(
            "exact enumeration over {m} players visits {} coalitions; expect a long run",
            (m as u64) << (m - 1)
        );
    }
    Ok(())
}

/// Removal amount per dimension for one coalition.
enum Removal<'a> {
    Fixed(Vec<f64>),
    Members(&'a [SubsetSums]),
}

impl Removal<'_> {
    #[inline]
    fn get(&self, c: u64, d: usize) -> f64 {
        match self {
            Removal::Fixed(v) => v[d],
            Removal::Members(t) => t[d].get(c),
        }
    }
}

fn count_swings(
    game: &VotingGame,
    sums: &[SubsetSums],
    player: usize,
    removal: &Removal<'_>,
) -> u64 {
    let m = game.players();
    let space = 1u64 << (m - 1);
    let chunk = 1u64 << CHUNK_BITS.min(m as u32 - 1);
    let chunks = space / chunk;
    let k = game.dims();
    (0..chunks)
        .into_par_iter()
        .map(|ci| {
            let mut n = 0u64;
            for rest in ci * chunk..(ci + 1) * chunk {
                let c = insert_player(rest, player);
                let wins = (0..k).all(|d| game.meets_quota(d, sums[d].get(c)));
                if wins && !(0..k).all(|d| game.meets_quota(d, sums[d].get(c) - removal.get(c, d)))
                {
                    n += 1;
                }
            }
            n
        })
        .sum()
}

/// Swing counts and indices, classical when `phi` is `None`.
pub fn exact_indices(game: &VotingGame, phi: Option<&AssociationMatrix>) -> Result<IndexReport> {
    exact_indices_scoped(game, phi, PersuasionScope::AllPlayers)
}

pub fn exact_indices_scoped(
    game: &VotingGame,
    phi: Option<&AssociationMatrix>,
    scope: PersuasionScope,
) -> Result<IndexReport> {
    check_exact_size(game)?;
    if let Some(phi) = phi {
        game.check_association(phi)?;
    }
    let sums = column_sums(game);
    let counts: Vec<u64> = (0..game.players())
        .into_par_iter()
        .map(|i| match (phi, scope) {
            (None, _) => count_swings(game, &sums, i, &Removal::Fixed(game.weight(i).to_vec())),
            (Some(phi), PersuasionScope::AllPlayers) => {
                let load = game.load_vector(phi, i, scope, Coalition::EMPTY);
                count_swings(game, &sums, i, &Removal::Fixed(load))
            }
            (Some(phi), PersuasionScope::CoalitionMembers) => {
                let tables: Vec<SubsetSums> = (0..game.dims())
                    .map(|d| {
                        let col: Vec<f64> = (0..game.players())
                            .map(|k| phi.get(i, k) * game.weight(k)[d])
                            .collect();
                        SubsetSums::new(&col)
                    })
                    .collect();
                count_swings(game, &sums, i, &Removal::Members(&tables))
            }
        })
        .collect();
    let mode = if phi.is_some() {
        IndexMode::Association
    } else {
        IndexMode::Classical
    };
    Ok(IndexReport::from_counts(game, mode, scope, counts))
}

/// Interval `[lower, upper)` of coalition weights.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct WeightWindow {
    pub lower: f64,
    pub upper: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DeltaReport {
    pub player: usize,
    /// Persuasion surplus `d_i`.
    pub surplus: f64,
    /// `q + w_i`.
    pub shifted_quota: f64,
    pub gain_count: u64,
    pub loss_count: u64,
    pub window: Option<WeightWindow>,
    /// `(gain_count - loss_count) / 2^(m-1)`.
    pub delta: f64,
}

impl DeltaReport {
    pub fn net_count(&self) -> i64 {
        self.gain_count as i64 - self.loss_count as i64
    }
}

/// Change in player `i`'s absolute index caused by `phi`, counted directly
/// from the coalitions whose weight falls in the persuasion window.
///
/// With `q_i = q + w_i` and surplus `d_i`, a positive surplus gains every
/// coalition with `q_i <= w(C) < q_i + d_i`; a negative one loses every
/// coalition with `max(q, q_i + d_i) <= w(C) < q_i`.
pub fn association_delta(
    game: &VotingGame,
    phi: &AssociationMatrix,
    i: usize,
) -> Result<DeltaReport> {
    if game.dims() != 1 {
        return Err(BanzhafError::MultiQuota(game.dims()));
    }
    check_exact_size(game)?;
    game.check_player(i)?;
    let load = game.persuasion_load(phi, i)?;
    let (wi, li) = (game.weight(i)[0], load.per_dim_load[0]);
    let surplus = load.surplus[0];
    let q = game.quotas()[0];
    let shifted = q + wi;
    let sums = &column_sums(game)[0];

    let m = game.players();
    // At or above q_i: still winning once w_i is removed.
    let above_shifted = |wc: f64| game.meets_quota(0, wc - wi);
    // At or above q_i + d_i: still winning once the load is removed.
    let above_loaded = |wc: f64| game.meets_quota(0, wc - li);
    let count = |pred: &(dyn Fn(f64) -> bool + Sync)| -> u64 {
        (0..1u64 << (m - 1))
            .into_par_iter()
            .filter(|&rest| pred(sums.get(insert_player(rest, i))))
            .count() as u64
    };

    let (gain_count, loss_count, window) = if surplus > 0.0 {
        let gain = count(&|wc| above_shifted(wc) && !above_loaded(wc));
        let w = WeightWindow {
            lower: shifted,
            upper: shifted + surplus,
        };
        (gain, 0, Some(w))
    } else if surplus < 0.0 {
        let loss = count(&|wc| game.meets_quota(0, wc) && above_loaded(wc) && !above_shifted(wc));
        let w = WeightWindow {
            lower: q.max(shifted + surplus),
            upper: shifted,
        };
        (0, loss, Some(w))
    } else {
        (0, 0, None)
    };
    let per_player = (1u64 << (m - 1)) as f64;
    Ok(DeltaReport {
        player: i,
        surplus,
        shifted_quota: shifted,
        gain_count,
        loss_count,
        window,
        delta: (gain_count as f64 - loss_count as f64) / per_player,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g321() -> VotingGame {
        VotingGame::single_quota(&[3.0, 2.0, 1.0], 4.0).unwrap()
    }

    #[test]
    fn three_player_classical() {
        let r = exact_indices(&g321(), None).unwrap();
        assert_eq!(r.swing_counts(), vec![3, 1, 1]);
        assert_eq!(r.absolute(), vec![0.75, 0.25, 0.25]);
        let n = r.normalized();
        for (a, b) in n.iter().zip([0.6, 0.2, 0.2]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn two_player_association() {
        let g = VotingGame::single_quota(&[2.0, 1.0], 2.0).unwrap();
        let phi = AssociationMatrix::from_rows(vec![vec![1.0, 1.0], vec![0.5, 1.0]]).unwrap();
        let r = exact_indices(&g, Some(&phi)).unwrap();
        assert_eq!(r.absolute(), vec![1.0, 0.5]);
        assert_eq!(r.mode, IndexMode::Association);
    }

    #[test]
    fn unwinnable_game_normalizes_to_zero() {
        let g = VotingGame::single_quota(&[1.0, 1.0], 5.0).unwrap();
        let r = exact_indices(&g, None).unwrap();
        assert_eq!(r.total_swings, 0);
        assert_eq!(r.normalized(), vec![0.0, 0.0]);
    }

    #[test]
    fn delta_examples() {
        let g = VotingGame::single_quota(&[2.0, 1.0], 2.0).unwrap();
        let pos = AssociationMatrix::from_rows(vec![vec![1.0, 1.0], vec![0.5, 1.0]]).unwrap();
        let d = association_delta(&g, &pos, 1).unwrap();
        assert_eq!((d.gain_count, d.loss_count, d.delta), (1, 0, 0.5));
        assert_eq!(
            d.window,
            Some(WeightWindow {
                lower: 3.0,
                upper: 4.0
            })
        );

        let neg = AssociationMatrix::from_rows(vec![vec![1.0, -1.0], vec![0.5, 1.0]]).unwrap();
        let d = association_delta(&g, &neg, 0).unwrap();
        assert_eq!((d.gain_count, d.loss_count, d.delta), (0, 1, -0.5));
        assert_eq!(
            d.window,
            Some(WeightWindow {
                lower: 3.0,
                upper: 4.0
            })
        );

        let id = AssociationMatrix::identity(2);
        for i in 0..2 {
            let d = association_delta(&g, &id, i).unwrap();
            assert_eq!((d.gain_count, d.loss_count, d.delta), (0, 0, 0.0));
        }
    }

    #[test]
    fn delta_rejects_multi_quota() {
        let g = VotingGame::new(vec!["a".into()], vec![vec![1.0, 1.0]], vec![1.0, 1.0]).unwrap();
        assert_eq!(
            association_delta(&g, &AssociationMatrix::identity(1), 0),
            Err(BanzhafError::MultiQuota(2))
        );
    }

    #[test]
    fn player_cap_enforced() {
        let g = VotingGame::single_quota(&vec![1.0; 33], 10.0).unwrap();
        assert!(matches!(
            exact_indices(&g, None),
            Err(BanzhafError::TooManyPlayers { .. })
        ));
    }

    #[test]
    fn insert_player_covers_space() {
        let mut seen: Vec<u64> = (0..8).map(|r| insert_player(r, 2)).collect();
        seen.sort_unstable();
        assert_eq!(seen, vec![4, 5, 6, 7, 12, 13, 14, 15]);
    }

    #[test]
    fn subset_sums_match_direct() {
        let col = [1.5, 2.25, 0.0, 7.0, 3.0];
        let t = SubsetSums::new(&col);
        for c in 0..32u64 {
            let direct: f64 = (0..5).filter(|i| c >> i & 1 == 1).map(|i| col[i]).sum();
            assert_eq!(t.get(c), direct);
        }
    }
}
