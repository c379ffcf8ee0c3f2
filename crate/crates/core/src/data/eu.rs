//! Council of the EU, the 18 members with at least 7 votes, as a 3-quota
//! game: votes, population (millions), and one unit per country.

use crate::error::Result;
use crate::game::VotingGame;

/// `(id, country, votes, population in millions)` in table order.
pub const EU_MEMBERS: [(&str, &str, f64, f64); 18] = [
    ("AUT", "Austria", 10.0, 8.58),
    ("BEL", "Belgium", 12.0, 11.25),
    ("CZE", "Czech Republic", 12.0, 10.53),
    ("DEU", "Germany", 29.0, 82.30),
    ("DNK", "Denmark", 7.0, 5.66),
    ("ESP", "Spain", 27.0, 46.46),
    ("FIN", "Finland", 7.0, 5.47),
    ("FRA", "France", 29.0, 66.99),
    ("GBR", "Britain", 29.0, 65.11),
    ("GRC", "Greece", 12.0, 10.81),
    ("HUN", "Hungary", 12.0, 9.85),
    ("IRL", "Ireland", 7.0, 4.63),
    ("ITA", "Italy", 29.0, 60.79),
    ("NLD", "Netherlands", 13.0, 17.10),
    ("POL", "Poland", 27.0, 38.56),
    ("PRT", "Portugal", 12.0, 10.37),
    ("SVK", "Slovakia", 7.0, 5.42),
    ("SWE", "Sweden", 10.0, 10.01),
];

pub const EU_TOTAL_VOTES: f64 = 291.0;
/// Published population total. The rows above sum to 469.89.
pub const EU_PUBLISHED_POPULATION: f64 = 469.93;
pub const EU_VOTE_FRACTION: f64 = 0.74;
pub const EU_POPULATION_FRACTION: f64 = 0.62;
/// Strict majority of 18 countries.
pub const EU_COUNTRY_QUOTA: f64 = 10.0;

/// How the 74% vote threshold is turned into a quota.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum EuWeightQuota {
    /// 74% of 291 rounded to whole votes: 215.
    #[default]
    WholeVotes,
    /// 74% of 291 as is: 215.34.
    Exact,
}

impl EuWeightQuota {
    pub fn quota(self) -> f64 {
        let raw = EU_VOTE_FRACTION * EU_TOTAL_VOTES;
        match self {
            EuWeightQuota::WholeVotes => raw.round(),
            EuWeightQuota::Exact => raw,
        }
    }

    fn label(self) -> &'static str {
        match self {
            EuWeightQuota::WholeVotes => "whole-votes",
            EuWeightQuota::Exact => "exact",
        }
    }
}

/// The EU game with the vote quota rounded to whole votes (215 of 291).
pub fn eu_game() -> VotingGame {
    eu_game_with(EuWeightQuota::WholeVotes).expect("embedded EU data is valid")
}

pub fn eu_game_with(rule: EuWeightQuota) -> Result<VotingGame> {
    let ids = EU_MEMBERS.iter().map(|m| m.0.to_string()).collect();
    let weights = EU_MEMBERS.iter().map(|m| vec![m.2, m.3, 1.0]).collect();
    let quotas = vec![
        rule.quota(),
        EU_POPULATION_FRACTION * EU_PUBLISHED_POPULATION,
        EU_COUNTRY_QUOTA,
    ];
    let order = EU_MEMBERS.iter().map(|m| m.0).collect::<Vec<_>>().join(",");
    Ok(VotingGame::new(ids, weights, quotas)?
        .with_metadata("name", "EU council, members with at least 7 votes")
        .with_metadata("dimensions", "votes,population_millions,countries")
        .with_metadata("country_order", order)
        .with_metadata("vote_quota_rule", rule.label()))
}

pub fn eu_country_name(id: &str) -> Option<&'static str> {
    EU_MEMBERS.iter().find(|m| m.0 == id).map(|m| m.1)
}
