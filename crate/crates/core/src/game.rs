//! Domain model: weighted voting games with one or more quotas, coalitions
//! encoded as bitmasks, association matrices, and the winning / criticality
//! predicates everything else is built on.
//!
//! Winning is componentwise `weight >= quota`. A member `i` of a winning
//! coalition `C` is critical when some dimension drops below quota once the
//! member's contribution is removed: its own weight in the classical game,
//! its persuasion load `sum_k a_ik w_k` in the association game.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{BanzhafError, Result};

/// Largest player count a [`Coalition`] bitmask can represent.
pub const MAX_PLAYERS: usize = 64;

/// Relative tolerance on the quota boundary for games with non-integer weights.
pub const QUOTA_REL_TOL: f64 = 1e-12;

/// A set of players, bit `i` set when player `i` is a member.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Coalition(u64);

impl Coalition {
    pub const EMPTY: Coalition = Coalition(0);

    /// Wraps a raw bitmask, rejecting bits at or beyond `players`.
    pub fn from_bits(bits: u64, players: usize) -> Result<Self> {
        if players < MAX_PLAYERS && bits >> players != 0 {
            return Err(BanzhafError::InvalidCoalition { players });
        }
        Ok(Coalition(bits))
    }

    pub fn from_members(members: &[usize], players: usize) -> Result<Self> {
        let mut bits = 0u64;
        for &i in members {
            if i >= players || i >= MAX_PLAYERS {
                return Err(BanzhafError::PlayerOutOfRange { index: i, players });
            }
            bits |= 1 << i;
        }
        Ok(Coalition(bits))
    }

    /// The grand coalition of `players` players.
    pub fn all(players: usize) -> Self {
        if players >= MAX_PLAYERS {
            Coalition(u64::MAX)
        } else {
            Coalition((1u64 << players) - 1)
        }
    }

    #[inline]
    pub(crate) const fn from_raw(bits: u64) -> Self {
        Coalition(bits)
    }

    #[inline]
    pub const fn bits(self) -> u64 {
        self.0
    }

    #[inline]
    pub const fn contains(self, i: usize) -> bool {
        i < MAX_PLAYERS && self.0 >> i & 1 == 1
    }

    #[inline]
    pub const fn with(self, i: usize) -> Self {
        Coalition(self.0 | 1 << i)
    }

    #[inline]
    pub const fn without(self, i: usize) -> Self {
        Coalition(self.0 & !(1 << i))
    }

    #[inline]
    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    /// Member indices in increasing order.
    pub fn members(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(i)
        })
    }
}

impl fmt::Debug for Coalition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.members()).finish()
    }
}

/// Persuasion coefficients `a_ij` with `|a_ij| <= 1` and unit diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct AssociationMatrix {
    size: usize,
    entries: Vec<f64>,
}

impl AssociationMatrix {
    pub fn identity(size: usize) -> Self {
        let mut entries = vec![0.0; size * size];
        for i in 0..size {
            entries[i * size + i] = 1.0;
        }
        AssociationMatrix { size, entries }
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let size = rows.len();
        let mut entries = Vec::with_capacity(size * size);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != size {
                return Err(BanzhafError::InvalidAssociation(format!(
                    "row {i} has {} entries, expected {size}",
                    row.len()
                )));
            }
            entries.extend(row);
        }
        Self::from_flat(size, entries)
    }

    /// Row-major constructor.
    pub fn from_flat(size: usize, entries: Vec<f64>) -> Result<Self> {
        if size == 0 {
            return Err(BanzhafError::InvalidAssociation("matrix is empty".into()));
        }
        if entries.len() != size * size {
            return Err(BanzhafError::DimensionMismatch {
                what: "association entries",
                expected: size * size,
                found: entries.len(),
            });
        }
        for i in 0..size {
            for j in 0..size {
                let a = entries[i * size + j];
                if !a.is_finite() || a.abs() > 1.0 {
                    return Err(BanzhafError::InvalidAssociation(format!(
                        "entry a[{i}][{j}] = {a} is outside [-1, 1]"
                    )));
                }
                if i == j && a != 1.0 {
                    return Err(BanzhafError::InvalidAssociation(format!(
                        "diagonal entry a[{i}][{i}] = {a} must equal 1"
                    )));
                }
            }
        }
        Ok(AssociationMatrix { size, entries })
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.size
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.size + j]
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.entries[i * self.size..(i + 1) * self.size]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.entries
            .chunks(self.size)
            .map(<[f64]>::to_vec)
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity(self.size)
    }
}

/// Which players contribute to a persuasion load.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PersuasionScope {
    /// `sum_{k=1..m} a_ik w_k`, every player in the game.
    #[default]
    AllPlayers,
    /// Only members of the coalition under test. Sensitivity variant.
    CoalitionMembers,
}

/// Boundary convention of the winning test.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WinningRule {
    /// `w(C) >= q` in every dimension.
    #[default]
    AtLeast,
    /// `w(C) > q` in every dimension.
    Exceeds,
}

/// Player `i`'s persuasion load per dimension and its surplus over `w_i`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PersuasionLoad {
    pub player: usize,
    pub per_dim_load: Vec<f64>,
    pub surplus: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VotingGame {
    player_ids: Vec<String>,
    dims: usize,
    /// Row-major `m x k`.
    weights: Vec<f64>,
    quotas: Vec<f64>,
    association: Option<AssociationMatrix>,
    metadata: BTreeMap<String, String>,
    rule: WinningRule,
    integral: bool,
}

impl VotingGame {
    /// Builds a game from per-player weight vectors and one quota per dimension.
    pub fn new(player_ids: Vec<String>, weights: Vec<Vec<f64>>, quotas: Vec<f64>) -> Result<Self> {
        let m = player_ids.len();
        if m == 0 {
            return Err(BanzhafError::InvalidGame(
                "a game needs at least one player".into(),
            ));
        }
        if m > MAX_PLAYERS {
            return Err(BanzhafError::TooManyPlayers {
                what: "a coalition bitmask",
                players: m,
                limit: MAX_PLAYERS,
            });
        }
        if weights.len() != m {
            return Err(BanzhafError::DimensionMismatch {
                what: "weight rows",
                expected: m,
                found: weights.len(),
            });
        }
        let dims = quotas.len();
        if dims == 0 {
            return Err(BanzhafError::InvalidGame(
                "a game needs at least one quota".into(),
            ));
        }
        for (d, &q) in quotas.iter().enumerate() {
            if !q.is_finite() || q <= 0.0 {
                return Err(BanzhafError::InvalidGame(format!(
                    "quota {d} = {q} must be finite and positive"
                )));
            }
        }
        let mut flat = Vec::with_capacity(m * dims);
        for (i, row) in weights.into_iter().enumerate() {
            if row.len() != dims {
                return Err(BanzhafError::DimensionMismatch {
                    what: "weight vector length",
                    expected: dims,
                    found: row.len(),
                });
            }
            for (d, &w) in row.iter().enumerate() {
                if !w.is_finite() || w < 0.0 {
                    return Err(BanzhafError::InvalidGame(format!(
                        "weight of player {} ({}) in dimension {d} is {w}; weights must be finite and non-negative",
                        i, player_ids[i]
                    )));
                }
            }
            flat.extend(row);
        }
        // Integer sums stay exact in f64 well below 2^53.
        let integral = flat.iter().all(|w| w.fract() == 0.0 && *w < 1e12);
        Ok(VotingGame {
            player_ids,
            dims,
            weights: flat,
            quotas,
            association: None,
            metadata: BTreeMap::new(),
            rule: WinningRule::AtLeast,
            integral,
        })
    }

    /// Single-quota game with players labelled `p1..pm`.
    pub fn single_quota(weights: &[f64], quota: f64) -> Result<Self> {
        let ids = (1..=weights.len()).map(|i| format!("p{i}")).collect();
        Self::new(ids, weights.iter().map(|&w| vec![w]).collect(), vec![quota])
    }

    pub fn with_association(mut self, phi: AssociationMatrix) -> Result<Self> {
        self.check_association(&phi)?;
        self.association = Some(phi);
        Ok(self)
    }

    pub fn with_rule(mut self, rule: WinningRule) -> Self {
        self.rule = rule;
        self
    }

    pub fn with_metadata(mut self, key: impl Into<String>, value: impl Into<String>) -> Self {
        self.metadata.insert(key.into(), value.into());
        self
    }

    pub fn without_association(mut self) -> Self {
        self.association = None;
        self
    }

    /// Same game with the quota vector replaced.
    pub fn with_quotas(&self, quotas: Vec<f64>) -> Result<Self> {
        let mut g = VotingGame::new(self.player_ids.clone(), self.weight_rows(), quotas)?;
        g.association = self.association.clone();
        g.metadata = self.metadata.clone();
        g.rule = self.rule;
        Ok(g)
    }

    #[inline]
    pub fn players(&self) -> usize {
        self.player_ids.len()
    }

    #[inline]
    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn player_ids(&self) -> &[String] {
        &self.player_ids
    }

    pub fn player_index(&self, id: &str) -> Option<usize> {
        self.player_ids.iter().position(|p| p == id)
    }

    #[inline]
    pub fn weight(&self, i: usize) -> &[f64] {
        &self.weights[i * self.dims..(i + 1) * self.dims]
    }

    pub fn weight_rows(&self) -> Vec<Vec<f64>> {
        self.weights
            .chunks(self.dims)
            .map(<[f64]>::to_vec)
            .collect()
    }

    pub fn quotas(&self) -> &[f64] {
        &self.quotas
    }

    pub fn association(&self) -> Option<&AssociationMatrix> {
        self.association.as_ref()
    }

    pub fn metadata(&self) -> &BTreeMap<String, String> {
        &self.metadata
    }

    pub fn rule(&self) -> WinningRule {
        self.rule
    }

    /// True when every weight is an integer, so coalition sums are exact.
    pub fn is_integral(&self) -> bool {
        self.integral
    }

    /// Column sums of the weight matrix.
    pub fn totals(&self) -> Vec<f64> {
        (0..self.dims)
            .map(|d| (0..self.players()).map(|i| self.weight(i)[d]).sum())
            .collect()
    }

    pub fn check_player(&self, i: usize) -> Result<()> {
        if i >= self.players() {
            return Err(BanzhafError::PlayerOutOfRange {
                index: i,
                players: self.players(),
            });
        }
        Ok(())
    }

    pub fn check_association(&self, phi: &AssociationMatrix) -> Result<()> {
        if phi.size() != self.players() {
            return Err(BanzhafError::DimensionMismatch {
                what: "association matrix size",
                expected: self.players(),
                found: phi.size(),
            });
        }
        Ok(())
    }

    pub fn check_coalition(&self, c: Coalition) -> Result<()> {
        Coalition::from_bits(c.bits(), self.players()).map(|_| ())
    }

    /// Quota test on a single dimension.
    #[inline]
    pub fn meets_quota(&self, d: usize, value: f64) -> bool {
        let q = self.quotas[d];
        let tol = if self.integral {
            0.0
        } else {
            QUOTA_REL_TOL * q
        };
        match self.rule {
            WinningRule::AtLeast => value >= q - tol,
            WinningRule::Exceeds => value > q + tol,
        }
    }

    #[inline]
    pub(crate) fn meets_all(&self, sums: impl Fn(usize) -> f64) -> bool {
        (0..self.dims).all(|d| self.meets_quota(d, sums(d)))
    }

    /// `w(C)` in dimension `d`, summed in index order.
    #[inline]
    pub fn coalition_weight_in(&self, c: Coalition, d: usize) -> f64 {
        c.members().map(|i| self.weights[i * self.dims + d]).sum()
    }

    pub fn coalition_weight(&self, c: Coalition) -> Vec<f64> {
        (0..self.dims)
            .map(|d| self.coalition_weight_in(c, d))
            .collect()
    }

    pub fn is_winning(&self, c: Coalition) -> bool {
        self.meets_all(|d| self.coalition_weight_in(c, d))
    }

    pub fn is_critical_classical(&self, i: usize, c: Coalition) -> Result<bool> {
        self.check_player(i)?;
        if !c.contains(i) {
            return Err(BanzhafError::NotAMember(i));
        }
        let sums = self.coalition_weight(c);
        let w = self.weight(i);
        Ok(self.meets_all(|d| sums[d]) && !self.meets_all(|d| sums[d] - w[d]))
    }

    /// Association criticality with the persuasion sum over all players.
    pub fn is_critical_assoc(
        &self,
        phi: &AssociationMatrix,
        i: usize,
        c: Coalition,
    ) -> Result<bool> {
        self.is_critical_assoc_scoped(phi, i, c, PersuasionScope::AllPlayers)
    }

    pub fn is_critical_assoc_scoped(
        &self,
        phi: &AssociationMatrix,
        i: usize,
        c: Coalition,
        scope: PersuasionScope,
    ) -> Result<bool> {
        self.check_player(i)?;
        self.check_association(phi)?;
        if !c.contains(i) {
            return Err(BanzhafError::NotAMember(i));
        }
        let sums = self.coalition_weight(c);
        if !self.meets_all(|d| sums[d]) {
            return Ok(false);
        }
        let load = self.load_vector(phi, i, scope, c);
        Ok(!self.meets_all(|d| sums[d] - load[d]))
    }

    pub fn persuasion_load(&self, phi: &AssociationMatrix, i: usize) -> Result<PersuasionLoad> {
        self.check_player(i)?;
        self.check_association(phi)?;
        let per_dim_load = self.load_vector(phi, i, PersuasionScope::AllPlayers, Coalition::EMPTY);
        let surplus = per_dim_load
            .iter()
            .zip(self.weight(i))
            .map(|(l, w)| l - w)
            .collect();
        Ok(PersuasionLoad {
            player: i,
            per_dim_load,
            surplus,
        })
    }

    /// `sum_k a_ik w_kd` over the players selected by `scope`; `c` is
    /// ignored for [`PersuasionScope::AllPlayers`].
    pub(crate) fn load_vector(
        &self,
        phi: &AssociationMatrix,
        i: usize,
        scope: PersuasionScope,
        c: Coalition,
    ) -> Vec<f64> {
        let row = phi.row(i);
        (0..self.dims)
            .map(|d| {
                let mut acc = 0.0;
                for (k, a) in row.iter().enumerate() {
                    if scope == PersuasionScope::CoalitionMembers && !c.contains(k) {
                        continue;
                    }
                    acc += a * self.weights[k * self.dims + d];
                }
                acc
            })
            .collect()
    }
}
