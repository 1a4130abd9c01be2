use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Whether payoffs accrue only at the leaves of the search tree or at every
/// state visited along the way.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PayoffModel {
    Leaf,
    Path,
}

/// Who the searching player assumes will move after her.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderModel {
    /// Each later move is made by the mover an adversary picks to hurt the
    /// searching player most.
    Worst,
    /// Each later move is made by a uniformly random mover.
    Average,
    /// Later moves are made by these players, in this order.
    Fixed(Vec<usize>),
    /// Later moves cycle through the players after the root mover:
    /// root+1, root+2, ... (mod n). Alternating play for two players.
    RoundRobin,
}

/// Which players are eligible to make a later move in the worst/average
/// models.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MoverPool {
    /// Every player, including the one who just moved.
    #[default]
    Any,
    /// Every player except the one who made the previous move.
    NoRepeat,
    /// Every player who has not yet moved on the current tree path.
    Distinct,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LookaheadConfig {
    /// Search depth per player.
    pub depth: Vec<usize>,
    pub payoff_model: PayoffModel,
    pub order_model: OrderModel,
    #[serde(default)]
    pub mover_pool: MoverPool,
}

impl LookaheadConfig {
    /// Every one of `players` players searches to depth `k`.
    pub fn uniform(players: usize, k: usize, payoff_model: PayoffModel, order_model: OrderModel) -> Self {
        LookaheadConfig {
            depth: vec![k; players],
            payoff_model,
            order_model,
            mover_pool: MoverPool::Any,
        }
    }

    /// Depth-1 search: myopic best response.
    pub fn myopic(players: usize) -> Self {
        Self::uniform(players, 1, PayoffModel::Leaf, OrderModel::Average)
    }

    pub fn with_pool(mut self, pool: MoverPool) -> Self {
        self.mover_pool = pool;
        self
    }

    pub fn max_depth(&self) -> usize {
        self.depth.iter().copied().max().unwrap_or(0)
    }

    pub fn validate(&self, players: usize) -> Result<()> {
        if self.depth.len() != players {
            return Err(Error::InvalidConfig(format!(
                "{} depths given for {players} players",
                self.depth.len()
            )));
        }
        if let Some(player) = self.depth.iter().position(|&d| d == 0) {
            return Err(Error::ZeroDepth { player });
        }
        let later_moves = self.max_depth() - 1;
        match &self.order_model {
            OrderModel::Fixed(seq) => {
                if seq.len() < later_moves {
                    return Err(Error::InvalidConfig(format!(
                        "fixed move sequence has {} entries, need at least {later_moves}",
                        seq.len()
                    )));
                }
                if let Some(&p) = seq.iter().find(|&&p| p >= players) {
                    return Err(Error::InvalidPlayer { player: p, players });
                }
            }
            OrderModel::Worst | OrderModel::Average => {
                if self.mover_pool == MoverPool::Distinct && self.max_depth() > players {
                    return Err(Error::InvalidConfig(format!(
                        "distinct movers need depth <= {players}, got {}",
                        self.max_depth()
                    )));
                }
                if self.mover_pool == MoverPool::NoRepeat && players < 2 && later_moves > 0 {
                    return Err(Error::InvalidConfig(
                        "a one-player game has no mover other than the previous one".into(),
                    ));
                }
                if self.mover_pool == MoverPool::Distinct && players > 64 {
                    return Err(Error::InvalidConfig("distinct-mover pools support at most 64 players".into()));
                }
            }
            OrderModel::RoundRobin => {}
        }
        Ok(())
    }
}
