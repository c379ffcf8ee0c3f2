//! JSON game files.
//!
//! ```json
//! {
//!   "players": [
//!     { "id": "DEU", "weights": [29, 82.30, 1] },
//!     { "id": "FRA", "weights": [29, 66.99, 1] }
//!   ],
//!   "quotas": [ { "fraction": 0.74 }, { "fraction": 0.62 }, 2 ],
//!   "association": [[1, 0.2], [-0.2, 1]],
//!   "rule": "at-least",
//!   "metadata": { "source": "example" }
//! }
//! ```
//!
//! A quota is either an absolute number or `{"fraction": f}`, resolved
//! against the column total of its dimension when the file is loaded.
//! `association` and `rule` are optional; `rule` is `at-least` (default) or
//! `exceeds`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{BanzhafError, Result};
use crate::game::{AssociationMatrix, VotingGame, WinningRule};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlayerSpec {
    pub id: String,
    pub weights: Vec<f64>,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum QuotaSpec {
    Absolute(f64),
    Fraction { fraction: f64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameSpecFile {
    pub players: Vec<PlayerSpec>,
    pub quotas: Vec<QuotaSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub association: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "is_default_rule")]
    pub rule: WinningRule,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

fn is_default_rule(r: &WinningRule) -> bool {
    *r == WinningRule::AtLeast
}

impl GameSpecFile {
    pub fn from_game(game: &VotingGame) -> Self {
        GameSpecFile {
            players: game
                .player_ids()
                .iter()
                .enumerate()
                .map(|(i, id)| PlayerSpec {
                    id: id.clone(),
                    weights: game.weight(i).to_vec(),
                })
                .collect(),
            quotas: game
                .quotas()
                .iter()
                .map(|&q| QuotaSpec::Absolute(q))
                .collect(),
            association: game.association().map(AssociationMatrix::rows),
            rule: game.rule(),
            metadata: game.metadata().clone(),
        }
    }

    pub fn into_game(self) -> Result<VotingGame> {
        let k = self.quotas.len();
        for (i, p) in self.players.iter().enumerate() {
            if p.weights.len() != k {
                return Err(BanzhafError::InvalidGame(format!(
                    "players[{i}] ({}): {} weights for {k} quotas",
                    p.id,
                    p.weights.len()
                )));
            }
            if let Some((d, w)) = p
                .weights
                .iter()
                .enumerate()
                .find(|(_, w)| w.is_nan() || **w < 0.0)
            {
                return Err(BanzhafError::InvalidGame(format!(
                    "players[{i}] ({}).weights[{d}] = {w}: weights must be non-negative",
                    p.id
                )));
            }
        }
        let mut seen = std::collections::HashSet::new();
        if let Some(dup) = self.players.iter().find(|p| !seen.insert(p.id.as_str())) {
            return Err(BanzhafError::InvalidGame(format!(
                "duplicate player id `{}`",
                dup.id
            )));
        }
        let quotas = self
            .quotas
            .iter()
            .enumerate()
            .map(|(d, q)| match *q {
                QuotaSpec::Absolute(v) => Ok(v),
                QuotaSpec::Fraction { fraction } => {
                    if !(fraction > 0.0 && fraction <= 1.0) {
                        return Err(BanzhafError::InvalidGame(format!(
                            "quotas[{d}].fraction = {fraction} must lie in (0, 1]"
                        )));
                    }
                    let total: f64 = self.players.iter().map(|p| p.weights[d]).sum();
                    Ok(fraction * total)
                }
            })
            .collect::<Result<Vec<_>>>()?;
        let ids = self.players.iter().map(|p| p.id.clone()).collect();
        let weights = self.players.into_iter().map(|p| p.weights).collect();
        let mut game = VotingGame::new(ids, weights, quotas)?.with_rule(self.rule);
        for (k, v) in self.metadata {
            game = game.with_metadata(k, v);
        }
        if let Some(rows) = self.association {
            let phi = AssociationMatrix::from_rows(rows)?;
            game = game.with_association(phi)?;
        }
        Ok(game)
    }
}

/// Parses a game file's JSON text.
pub fn load_game(text: &str) -> Result<VotingGame> {
    let spec: GameSpecFile =
        serde_json::from_str(text).map_err(|e| BanzhafError::Parse(e.to_string()))?;
    spec.into_game()
}

pub fn save_game(game: &VotingGame) -> String {
    serde_json::to_string_pretty(&GameSpecFile::from_game(game)).expect("game spec serializes")
}

/// Parses a bare association matrix: a JSON array of rows.
pub fn load_association(text: &str) -> Result<AssociationMatrix> {
    let rows: Vec<Vec<f64>> =
        serde_json::from_str(text).map_err(|e| BanzhafError::Parse(e.to_string()))?;
    AssociationMatrix::from_rows(rows)
}
