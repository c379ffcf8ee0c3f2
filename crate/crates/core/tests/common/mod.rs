#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use banzhaf::data::random_association;
use banzhaf::{AssociationMatrix, VotingGame};

pub const FIXED12: [f64; 12] = [
    20.0, 18.0, 15.0, 12.0, 10.0, 9.0, 7.0, 6.0, 4.0, 3.0, 2.0, 1.0,
];

pub fn fixed12() -> VotingGame {
    VotingGame::single_quota(&FIXED12, FIXED12.iter().sum::<f64>() / 2.0).unwrap()
}

/// Integer weights in `1..=20`, `min_m..=max_m` players, quota half the total.
pub fn random_game(rng: &mut ChaCha8Rng, min_m: usize, max_m: usize) -> VotingGame {
    let m = rng.random_range(min_m..=max_m);
    let w: Vec<f64> = (0..m).map(|_| rng.random_range(1..=20u32) as f64).collect();
    let q = w.iter().sum::<f64>() / 2.0;
    VotingGame::single_quota(&w, q).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_phi(rng: &mut ChaCha8Rng, m: usize) -> AssociationMatrix {
    random_association(m, rng.random()).unwrap()
}

/// Straight from the definitions: player `i` swings in `S` when `S` wins on
/// every dimension and `S` minus the load (or minus `w_i` when `phi` is
/// absent) loses on some dimension.
pub fn naive_swings(game: &VotingGame, phi: Option<&AssociationMatrix>, i: usize) -> u64 {
    let m = game.players();
    let k = game.dims();
    let q = game.quotas();
    let load: Vec<f64> = (0..k)
        .map(|d| match phi {
            Some(phi) => (0..m).map(|j| phi.get(i, j) * game.weight(j)[d]).sum(),
            None => game.weight(i)[d],
        })
        .collect();
    let mut count = 0;
    for s in 0u64..1 << m {
        if s >> i & 1 == 0 {
            continue;
        }
        let sum: Vec<f64> = (0..k)
            .map(|d| {
                (0..m)
                    .filter(|j| s >> j & 1 == 1)
                    .map(|j| game.weight(j)[d])
                    .sum()
            })
            .collect();
        let wins = (0..k).all(|d| sum[d] >= q[d]);
        let still = (0..k).all(|d| sum[d] - load[d] >= q[d]);
        if wins && !still {
            count += 1;
        }
    }
    count
}
