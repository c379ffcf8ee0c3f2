//! Game construction: JSON game files, migration-based and random
//! association matrices, and the embedded EU council data.

mod eu;
mod migration;
mod spec_file;

pub use eu::{
    eu_country_name, eu_game, eu_game_with, EuWeightQuota, EU_COUNTRY_QUOTA, EU_MEMBERS,
    EU_POPULATION_FRACTION, EU_PUBLISHED_POPULATION, EU_TOTAL_VOTES, EU_VOTE_FRACTION,
};
pub use migration::{build_migration_association, random_association, MigrationTable};
pub use spec_file::{load_association, load_game, save_game, GameSpecFile, PlayerSpec, QuotaSpec};
