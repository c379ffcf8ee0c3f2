//! Confidence intervals around a Monte Carlo estimate and the matching
//! sample-size plans.
//!
//! | method        | half-width                    | samples for accuracy eps         |
//! |---------------|-------------------------------|----------------------------------|
//! | hoeffding     | `sqrt(ln(2/delta) / (2n))`    | `ceil(ln(2/delta) / (2 eps^2))`  |
//! | student       | `t_{delta/2,n-1} S / sqrt(n)` | `ceil(S^2 z_{delta/2}^2 / eps^2)`|
//! | selfbounding  | `sqrt(B ln(2/delta) / n)`     | `ceil(B ln(2/delta) / eps^2)`    |
//!
//! `B` stands in for the unknown `2 beta_i + eps` in the one-sided
//! self-bounding tail bound.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::estimate::EstimateReport;
use super::quantile::{normal_upper_quantile, student_upper_quantile};
use crate::bounds::ht_bound;
use crate::error::{BanzhafError, Result};
use crate::exact::IndexMode;
use crate::game::VotingGame;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntervalMethod {
    #[default]
    Hoeffding,
    Student,
    #[serde(rename = "selfbounding")]
    SelfBounding,
}

impl fmt::Display for IntervalMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            IntervalMethod::Hoeffding => "hoeffding",
            IntervalMethod::Student => "student",
            IntervalMethod::SelfBounding => "selfbounding",
        })
    }
}

impl FromStr for IntervalMethod {
    type Err = BanzhafError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hoeffding" => Ok(IntervalMethod::Hoeffding),
            "student" => Ok(IntervalMethod::Student),
            "selfbounding" => Ok(IntervalMethod::SelfBounding),
            other => Err(BanzhafError::InvalidParameter(format!(
                "unknown interval method `{other}`"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfidenceInterval {
    pub estimate: f64,
    pub lower: f64,
    pub upper: f64,
    /// Half-width before clipping to `[0, 1]`.
    pub halfwidth: f64,
    pub method: IntervalMethod,
    pub delta: f64,
    pub samples: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound_b: Option<f64>,
}

fn check_unit_open(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(BanzhafError::InvalidParameter(format!(
            "{name} = {v} must lie in (0, 1)"
        )))
    }
}

fn check_b(b: Option<f64>) -> Result<f64> {
    let b = b.ok_or(BanzhafError::MissingParameter("B"))?;
    if b.is_finite() && b > 0.0 {
        Ok(b)
    } else {
        Err(BanzhafError::InvalidParameter(format!(
            "B = {b} must be positive"
        )))
    }
}

/// Half-width for `n` samples at confidence `1 - delta`.
pub fn halfwidth(
    method: IntervalMethod,
    n: u64,
    delta: f64,
    s2: Option<f64>,
    b: Option<f64>,
) -> Result<f64> {
    check_unit_open("delta", delta)?;
    if n == 0 {
        return Err(BanzhafError::InvalidParameter(
            "sample count must be at least 1".into(),
        ));
    }
    let nf = n as f64;
    let log_term = (2.0 / delta).ln();
    match method {
        IntervalMethod::Hoeffding => Ok((log_term / (2.0 * nf)).sqrt()),
        IntervalMethod::Student => {
            if n < 2 {
                return Err(BanzhafError::InvalidParameter(
                    "student interval needs at least 2 samples".into(),
                ));
            }
            let s2 = s2.ok_or(BanzhafError::MissingParameter("s2"))?;
            if s2 == 0.0 {
                return Ok(0.0);
            }
            let t = student_upper_quantile(delta / 2.0, nf - 1.0)?;
            Ok(t * s2.sqrt() / nf.sqrt())
        }
        IntervalMethod::SelfBounding => Ok((check_b(b)? * log_term / nf).sqrt()),
    }
}

/// Interval for one player of an estimate report. `b` is required for
/// [`IntervalMethod::SelfBounding`] and ignored otherwise.
pub fn confidence_interval(
    report: &EstimateReport,
    player: usize,
    delta: f64,
    method: IntervalMethod,
    b: Option<f64>,
) -> Result<ConfidenceInterval> {
    let p = report
        .players
        .get(player)
        .ok_or(BanzhafError::PlayerOutOfRange {
            index: player,
            players: report.players.len(),
        })?;
    let h = halfwidth(method, report.samples, delta, p.sample_variance, b)?;
    Ok(ConfidenceInterval {
        estimate: p.estimate,
        lower: (p.estimate - h).max(0.0),
        upper: (p.estimate + h).min(1.0),
        halfwidth: h,
        method,
        delta,
        samples: report.samples,
        bound_b: (method == IntervalMethod::SelfBounding)
            .then_some(b)
            .flatten(),
    })
}

/// Samples needed for half-width at most `epsilon` at confidence `1 - delta`.
///
/// The student plan uses the large-sample normal quantile because the
/// degrees of freedom are not known before sampling.
pub fn required_samples(
    epsilon: f64,
    delta: f64,
    method: IntervalMethod,
    s2: Option<f64>,
    b: Option<f64>,
) -> Result<u64> {
    check_unit_open("epsilon", epsilon)?;
    check_unit_open("delta", delta)?;
    let log_term = (2.0 / delta).ln();
    let eps2 = epsilon * epsilon;
    let n = match method {
        IntervalMethod::Hoeffding => log_term / (2.0 * eps2),
        IntervalMethod::Student => {
            let s2 = s2.ok_or(BanzhafError::MissingParameter("s2"))?;
            if s2.is_nan() || s2 < 0.0 {
                return Err(BanzhafError::InvalidParameter(format!(
                    "s2 = {s2} must be non-negative"
                )));
            }
            let z = normal_upper_quantile(delta / 2.0)?;
            s2 * z * z / eps2
        }
        IntervalMethod::SelfBounding => check_b(b)? * log_term / eps2,
    };
    Ok((n.ceil() as u64).max(1))
}

/// Default `B` for the self-bounding interval: `2 min(1, ht) + eps` with the
/// player's ht bound on classical single-quota games, `2 + eps` otherwise
/// (the ht bound does not cover association indices).
pub fn default_selfbounding_b(
    game: &VotingGame,
    player: usize,
    epsilon: f64,
    mode: IndexMode,
) -> Result<f64> {
    game.check_player(player)?;
    let beta_bound = match mode {
        IndexMode::Classical if game.dims() == 1 => ht_bound(game, player)?.value.min(1.0),
        _ => 1.0,
    };
    Ok((2.0 * beta_bound + epsilon).clamp(epsilon, 2.0 + epsilon))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::PersuasionScope;
    use crate::sampling::estimate::{EstimateReport, PlayerEstimate};

    fn report(estimate: f64, swings: u64, n: u64, s2: Option<f64>) -> EstimateReport {
        EstimateReport {
            mode: IndexMode::Classical,
            scope: PersuasionScope::AllPlayers,
            samples: n,
            seed: 0,
            players: vec![PlayerEstimate {
                id: "p1".into(),
                estimate,
                swing_count: swings,
                sample_variance: s2,
            }],
        }
    }

    #[test]
    fn hoeffding_halfwidth_at_planned_n() {
        let h = halfwidth(IntervalMethod::Hoeffding, 26_492, 0.01, None, None).unwrap();
        assert!((h - (200f64.ln() / 52_984.0).sqrt()).abs() < 1e-15);
        assert!((h - 0.0100).abs() < 5e-5);
    }

    #[test]
    fn selfbounding_halfwidth() {
        let h = halfwidth(IntervalMethod::SelfBounding, 1000, 0.05, None, Some(2.05)).unwrap();
        assert!((h - 0.08696).abs() < 5e-6, "{h}");
        assert_eq!(
            halfwidth(IntervalMethod::SelfBounding, 1000, 0.05, None, None),
            Err(BanzhafError::MissingParameter("B"))
        );
    }

    #[test]
    fn student_zero_variance_is_degenerate() {
        let r = report(1.0, 50, 50, Some(0.0));
        let ci = confidence_interval(&r, 0, 0.05, IntervalMethod::Student, None).unwrap();
        assert_eq!((ci.lower, ci.upper, ci.halfwidth), (1.0, 1.0, 0.0));
        let r1 = report(1.0, 1, 1, None);
        assert!(confidence_interval(&r1, 0, 0.05, IntervalMethod::Student, None).is_err());
    }

    #[test]
    fn student_uses_t_quantile() {
        let r = report(0.5, 5, 10, Some(0.25 * 10.0 / 9.0));
        let ci = confidence_interval(&r, 0, 0.05, IntervalMethod::Student, None).unwrap();
        let want = 2.262157 * (0.25f64 * 10.0 / 9.0).sqrt() / 10f64.sqrt();
        assert!((ci.halfwidth - want).abs() < 1e-5);
    }

    #[test]
    fn intervals_are_clipped_and_contain_estimate() {
        let r = report(0.02, 2, 100, Some(0.0198));
        for m in [
            IntervalMethod::Hoeffding,
            IntervalMethod::Student,
            IntervalMethod::SelfBounding,
        ] {
            let ci = confidence_interval(&r, 0, 0.1, m, Some(0.5)).unwrap();
            assert_eq!(ci.lower, 0.0);
            assert!(ci.lower <= ci.estimate && ci.estimate <= ci.upper);
            assert!((ci.upper - (0.02 + ci.halfwidth)).abs() < 1e-15);
        }
    }

    #[test]
    fn invalid_delta_rejected() {
        for d in [0.0, 1.0, -0.5, f64::NAN] {
            assert!(halfwidth(IntervalMethod::Hoeffding, 10, d, None, None).is_err());
        }
    }

    #[test]
    fn sample_size_plans() {
        assert_eq!(
            required_samples(0.01, 0.01, IntervalMethod::Hoeffding, None, None).unwrap(),
            26_492
        );
        assert_eq!(
            required_samples(0.05, 0.05, IntervalMethod::Hoeffding, None, None).unwrap(),
            738
        );
        assert_eq!(
            required_samples(0.05, 0.05, IntervalMethod::Student, Some(0.25), None).unwrap(),
            385
        );
        assert_eq!(
            required_samples(0.01, 0.01, IntervalMethod::SelfBounding, None, Some(0.25)).unwrap(),
            13_246
        );
        assert_eq!(
            required_samples(0.01, 0.01, IntervalMethod::Student, None, None),
            Err(BanzhafError::MissingParameter("s2"))
        );
        assert!(required_samples(0.0, 0.01, IntervalMethod::Hoeffding, None, None).is_err());
    }

    #[test]
    fn planned_n_achieves_epsilon() {
        for &(eps, delta) in &[(0.01, 0.01), (0.05, 0.05), (0.02, 0.1)] {
            let n = required_samples(eps, delta, IntervalMethod::Hoeffding, None, None).unwrap();
            assert!(halfwidth(IntervalMethod::Hoeffding, n, delta, None, None).unwrap() <= eps);
            assert!(halfwidth(IntervalMethod::Hoeffding, n - 1, delta, None, None).unwrap() > eps);
        }
    }

    #[test]
    fn default_b_uses_ht_bound() {
        let g = VotingGame::single_quota(&[3.0, 2.0, 1.0], 4.0).unwrap();
        let b = default_selfbounding_b(&g, 2, 0.01, IndexMode::Classical).unwrap();
        assert!((b - 0.51).abs() < 1e-12);
        let b = default_selfbounding_b(&g, 2, 0.01, IndexMode::Association).unwrap();
        assert!((b - 2.01).abs() < 1e-12);
    }
}
