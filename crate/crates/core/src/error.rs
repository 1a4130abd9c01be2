use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("player {player} out of range for a {players}-player game")]
    InvalidPlayer { player: usize, players: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("lookahead depth must be at least 1 (player {player} has depth 0)")]
    ZeroDepth { player: usize },

    #[error("invalid lookahead configuration: {0}")]
    InvalidConfig(String),

    #[error("state space of {size} profiles exceeds the enumeration cap of {cap}")]
    StateSpaceTooLarge { size: u128, cap: u128 },

    #[error("player {player} has {count} candidate paths, above the cap of {cap}")]
    PathCapExceeded { player: usize, count: usize, cap: usize },

    #[error("no lookahead equilibrium exists under this configuration")]
    NoEquilibrium,

    #[error("move leads outside the enumerated state set; the state graph is not closed")]
    NotClosed,

    #[error("invalid instance: {0}")]
    InvalidInstance(String),
}
