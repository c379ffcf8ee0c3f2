use thiserror::Error;

pub type Result<T, E = BanzhafError> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BanzhafError {
    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("invalid association matrix: {0}")]
    InvalidAssociation(String),

    #[error("dimension mismatch: expected {expected}, found {found} ({what})")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("player index {index} out of range for a game with {players} players")]
    PlayerOutOfRange { index: usize, players: usize },

    #[error("player {0} is not a member of the coalition")]
    NotAMember(usize),

    #[error("coalition is not winning")]
    LosingCoalition,

    #[error("coalition has bits set beyond player {players}")]
    InvalidCoalition { players: usize },

    #[error("{players} players exceeds the limit of {limit} for {what}")]
    TooManyPlayers {
        what: &'static str,
        players: usize,
        limit: usize,
    },

    #[error("operation requires a single-quota game, found {0} quotas")]
    MultiQuota(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("missing parameter `{0}`")]
    MissingParameter(&'static str),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("all migration flows are symmetric; the association normalizer is zero")]
    SymmetricFlows,
}
