//! Diagnostic upper bounds on single-quota Banzhaf indices, the all-critical
//! coalition weight property, and an evidence scan for the `2w/N` bound on
//! normalized indices.
//!
//! The global size-window bounds are reported exactly as their closed forms
//! evaluate and are flagged whenever they fall below the largest exact index;
//! they are not assumed to hold.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{BanzhafError, Result};
use crate::exact::{exact_indices, IndexReport};
use crate::game::{Coalition, VotingGame};
use crate::sampling::derived_seed;

/// Player limit for the binomial sums (u128 holds `n 2^n` up to here).
pub const MAX_BOUND_PLAYERS: usize = 64;

fn single_quota(game: &VotingGame) -> Result<f64> {
    match game.dims() {
        1 => Ok(game.quotas()[0]),
        k => Err(BanzhafError::MultiQuota(k)),
    }
}

fn scalar_weights(game: &VotingGame) -> Vec<f64> {
    (0..game.players()).map(|i| game.weight(i)[0]).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HtBound {
    pub value: f64,
    /// Size of the largest set made of player `i` and the lightest other
    /// players that stays below quota; 0 when `w_i` alone meets it.
    pub t: usize,
    /// Fewest heaviest other players whose weight exceeds the quota.
    pub h: Option<usize>,
}

/// `(2^n - 2^t - 2^(n-h)) / 2^n`. The `2^t` term is dropped when `t = 0`
/// (no losing set contains `i`) and the `2^(n-h)` term when no `h` exists.
pub fn ht_bound(game: &VotingGame, i: usize) -> Result<HtBound> {
    let q = single_quota(game)?;
    game.check_player(i)?;
    let n = game.players();
    let w = scalar_weights(game);
    let mut others: Vec<f64> = w
        .iter()
        .enumerate()
        .filter(|&(j, _)| j != i)
        .map(|(_, &x)| x)
        .collect();
    others.sort_by(f64::total_cmp);

    let mut t = 0;
    let mut acc = w[i];
    if acc < q {
        t = 1;
        for &x in &others {
            if acc + x < q {
                acc += x;
                t += 1;
            } else {
                break;
            }
        }
    }

    let mut h = None;
    let mut acc = 0.0;
    for (k, &x) in others.iter().rev().enumerate() {
        acc += x;
        if acc > q {
            h = Some(k + 1);
            break;
        }
    }

    let low = if t == 0 { 0.0 } else { (t as f64).exp2() };
    let high = h.map_or(0.0, |h| ((n - h) as f64).exp2());
    let full = (n as f64).exp2();
    Ok(HtBound {
        value: (full - low - high) / full,
        t,
        h,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SizeWindow {
    /// Largest `k` with `k max(W) < q`, capped at `n`.
    pub m_low: u64,
    /// Smallest `M` with `M min(W) - max(W) > q`; `None` when `min(W) = 0`.
    pub m_high: Option<u64>,
}

pub fn size_window(game: &VotingGame) -> Result<SizeWindow> {
    let q = single_quota(game)?;
    let n = game.players() as u64;
    let w = scalar_weights(game);
    let max = w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = w.iter().copied().fold(f64::INFINITY, f64::min);

    let m_low = if max <= 0.0 {
        n
    } else {
        let mut k = ((q / max).ceil() - 1.0).clamp(0.0, n as f64) as u64;
        while k < n && ((k + 1) as f64) * max < q {
            k += 1;
        }
        while k > 0 && (k as f64) * max >= q {
            k -= 1;
        }
        k
    };

    let m_high = if min <= 0.0 {
        None
    } else {
        let guess = ((q + max) / min).floor();
        if guess >= u64::MAX as f64 {
            Some(u64::MAX)
        } else {
            let mut k = guess.max(0.0) as u64;
            while k > 0 && ((k - 1) as f64) * min - max > q {
                k -= 1;
            }
            while (k as f64) * min - max <= q {
                k += 1;
            }
            Some(k)
        }
    };
    Ok(SizeWindow { m_low, m_high })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GlobalBounds {
    pub window: SizeWindow,
    pub bound1: f64,
    pub bound2: f64,
    /// `bound1 = bound1_numerator / 2^n`.
    #[serde(skip)]
    pub bound1_numerator: i128,
    /// `bound2 = bound2_numerator / (n 2^n)`.
    #[serde(skip)]
    pub bound2_numerator: i128,
    pub max_exact_index: Option<f64>,
    pub bound1_violated: Option<bool>,
    pub bound2_violated: Option<bool>,
}

fn binomial_row(n: usize) -> Vec<u128> {
    let mut row = vec![1u128; n + 1];
    for k in 1..n {
        row[k] = row[k - 1] * (n - k + 1) as u128 / k as u128;
    }
    row
}

/// Both size-window bounds, compared against `exact` when supplied.
pub fn global_bounds(game: &VotingGame, exact: Option<&IndexReport>) -> Result<GlobalBounds> {
    single_quota(game)?;
    let n = game.players();
    if n > MAX_BOUND_PLAYERS {
        return Err(BanzhafError::TooManyPlayers {
            what: "binomial bounds",
            players: n,
            limit: MAX_BOUND_PLAYERS,
        });
    }
    let window = size_window(game)?;
    let top = window.m_high.map_or(n as u64, |m| m.min(n as u64));
    let row = binomial_row(n);
    let (mut count_sum, mut weighted_sum) = (0u128, 0u128);
    for size in window.m_low + 1..=top {
        let c = row[size as usize];
        count_sum += c;
        weighted_sum += size as u128 * c;
    }
    let half = 1u128 << (n - 1);
    let b1_num = count_sum as i128 - half as i128;
    let b2_num = weighted_sum as i128 - (n as u128 * half) as i128;
    let full = (n as f64).exp2();
    let bound1 = b1_num as f64 / full;
    let bound2 = b2_num as f64 / (n as f64 * full);

    let max_exact_index = exact.map(|r| r.absolute().into_iter().fold(0.0, f64::max));
    Ok(GlobalBounds {
        window,
        bound1,
        bound2,
        bound1_numerator: b1_num,
        bound2_numerator: b2_num,
        max_exact_index,
        bound1_violated: max_exact_index.map(|b| b > bound1),
        bound2_violated: max_exact_index.map(|b| b > bound2),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckOutcome {
    Holds,
    Violated,
    NotApplicable,
}

/// For a winning coalition whose members are all critical and `|C| >= 2`,
/// checks `w(C) < |C| q / (|C| - 1)`.
pub fn all_critical_weight_check(game: &VotingGame, c: Coalition) -> Result<CheckOutcome> {
    let q = single_quota(game)?;
    game.check_coalition(c)?;
    if !game.is_winning(c) {
        return Err(BanzhafError::LosingCoalition);
    }
    let size = c.len();
    if size < 2 {
        return Ok(CheckOutcome::NotApplicable);
    }
    for i in c.members() {
        if !game.is_critical_classical(i, c)? {
            return Ok(CheckOutcome::NotApplicable);
        }
    }
    let wc = game.coalition_weight_in(c, 0);
    let s = size as f64;
    Ok(if wc * (s - 1.0) < s * q {
        CheckOutcome::Holds
    } else {
        CheckOutcome::Violated
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PlayerBound {
    pub id: String,
    pub ht_bound: f64,
    pub t: usize,
    pub h: Option<usize>,
    pub exact: Option<f64>,
    pub ht_violated: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundsReport {
    pub players: Vec<PlayerBound>,
    pub global: GlobalBounds,
    pub interpretation: Vec<(String, String)>,
}

/// Per-player ht bounds plus the global bounds, with violation flags when
/// exact indices are supplied.
pub fn bounds_report(game: &VotingGame, exact: Option<&IndexReport>) -> Result<BoundsReport> {
    let global = global_bounds(game, exact)?;
    let players = (0..game.players())
        .map(|i| {
            let ht = ht_bound(game, i)?;
            let exact = exact.map(|r| r.players[i].absolute);
            Ok(PlayerBound {
                id: game.player_ids()[i].clone(),
                ht_bound: ht.value,
                t: ht.t,
                h: ht.h,
                exact,
                ht_violated: exact.map(|b| b > ht.value),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let interpretation = vec![
        (
            "m_low".to_string(),
            "largest k with k*max(W) < q (literal text says smallest)".to_string(),
        ),
        (
            "m_high".to_string(),
            "smallest M with M*min(W) - max(W) > q".to_string(),
        ),
        (
            "t".to_string(),
            "player i plus the lightest others, largest set below q; 2^t term is 0 when t = 0"
                .to_string(),
        ),
        (
            "h".to_string(),
            "fewest heaviest others (i excluded) exceeding q; 2^(n-h) term is 0 when none"
                .to_string(),
        ),
    ];
    Ok(BoundsReport {
        players,
        global,
        interpretation,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Counterexample {
    pub weights: Vec<f64>,
    pub quota: f64,
    pub player: usize,
    pub normalized_index: f64,
    /// `2w/N`.
    pub limit: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConjectureReport {
    pub games_scanned: u64,
    pub counterexamples: Vec<Counterexample>,
    /// Minimum over all games and players of `2w/N - normalized index`.
    pub min_slack: f64,
}

/// Random game family for [`conjecture_scan`]: integer weights in
/// `1..=max_weight`, player count in `min_players..=max_players`, quota half
/// the total weight.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ScanParams {
    pub min_players: usize,
    pub max_players: usize,
    pub max_weight: u32,
}

impl Default for ScanParams {
    fn default() -> Self {
        ScanParams {
            min_players: 3,
            max_players: 12,
            max_weight: 20,
        }
    }
}

/// Evidence for `normalized_i <= 2 max(w) / sum(w)` on one game.
pub fn conjecture_check(game: &VotingGame) -> Result<ConjectureReport> {
    single_quota(game)?;
    let report = exact_indices(game, None)?;
    let w = scalar_weights(game);
    let total: f64 = w.iter().sum();
    let limit = 2.0 * w.iter().copied().fold(0.0, f64::max) / total;
    let mut min_slack = f64::INFINITY;
    let mut counterexamples = Vec::new();
    for (i, p) in report.players.iter().enumerate() {
        let slack = limit - p.normalized;
        min_slack = min_slack.min(slack);
        if slack < 0.0 {
            counterexamples.push(Counterexample {
                weights: w.clone(),
                quota: game.quotas()[0],
                player: i,
                normalized_index: p.normalized,
                limit,
            });
        }
    }
    Ok(ConjectureReport {
        games_scanned: 1,
        counterexamples,
        min_slack,
    })
}

pub fn random_scan_game(params: &ScanParams, seed: u64) -> Result<VotingGame> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let m = rng.random_range(params.min_players..=params.max_players);
    let weights: Vec<f64> = (0..m)
        .map(|_| rng.random_range(1..=params.max_weight) as f64)
        .collect();
    let total: f64 = weights.iter().sum();
    VotingGame::single_quota(&weights, total / 2.0)
}

pub fn conjecture_scan(params: &ScanParams, trials: u64, seed: u64) -> Result<ConjectureReport> {
    if trials == 0 {
        return Err(BanzhafError::InvalidParameter(
            "trials must be at least 1".into(),
        ));
    }
    if params.min_players == 0 || params.min_players > params.max_players || params.max_weight == 0
    {
        return Err(BanzhafError::InvalidParameter(format!(
            "invalid scan parameters {params:?}"
        )));
    }
    if params.max_players > crate::exact::MAX_EXACT_PLAYERS {
        return Err(BanzhafError::TooManyPlayers {
            what: "conjecture scan",
            players: params.max_players,
            limit: crate::exact::MAX_EXACT_PLAYERS,
        });
    }
    let per_trial = (0..trials)
        .into_par_iter()
        .map(|t| random_scan_game(params, derived_seed(seed, t)).and_then(|g| conjecture_check(&g)))
        .collect::<Result<Vec<_>>>()?;
    let mut merged = ConjectureReport {
        games_scanned: 0,
        counterexamples: Vec::new(),
        min_slack: f64::INFINITY,
    };
    for r in per_trial {
        merged.games_scanned += r.games_scanned;
        merged.min_slack = merged.min_slack.min(r.min_slack);
        merged.counterexamples.extend(r.counterexamples);
    }
    Ok(merged)
}
