//! Banzhaf power indices for weighted voting games with one or more quotas,
//! in the classical form and in an association-aware form where a player's
//! departure from a coalition also removes the persuasion it exerts on the
//! other players.
//!
//! ```
//! use banzhaf::{exact_indices, VotingGame};
//!
//! let game = VotingGame::single_quota(&[3.0, 2.0, 1.0], 4.0).unwrap();
//! let report = exact_indices(&game, None).unwrap();
//! assert_eq!(report.swing_counts(), vec![3, 1, 1]);
//! ```

pub mod bounds;
pub mod cli;
pub mod data;
mod error;
pub mod exact;
pub mod game;
pub mod report;
pub mod sampling;

pub use error::{BanzhafError, Result};
pub use exact::{
    association_delta, exact_indices, exact_indices_scoped, DeltaReport, IndexMode, IndexReport,
};
pub use game::{
    AssociationMatrix, Coalition, PersuasionLoad, PersuasionScope, VotingGame, WinningRule,
};
pub use sampling::{
    confidence_interval, estimate_indices, required_samples, ConfidenceInterval, EstimateReport,
    IntervalMethod,
};
