//! Utility games with submodular social functions.
//!
//! [`SteinerGame`] splits players into overlapping sub-games along the blocks
//! of a Steiner system, where lookahead search keeps everyone naughty and
//! halves the social value. [`BasicUtilityGame`] is a two-player game with
//! Vickrey payoffs whose only depth-2 leaf-model equilibrium is far from the
//! optimum.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

mod basic;
mod steiner;

pub use basic::{basic_utility_config, basic_utility_equilibria, Action, BasicUtilityGame, BasicUtilityReport};
pub use steiner::{
    guaranteed_scores, is_pairwise_balanced, projective_plane, steiner_config, steiner_dynamics, SteinerDynamics,
    SteinerGame, SteinerRow,
};

/// Instance file for either construction, e.g. `{"construction": "basic",
/// "kappa": 120}` or `{"construction": "steiner", "q": 2}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "construction", rename_all = "snake_case")]
pub enum UtilityConstruction {
    Basic { kappa: f64 },
    Steiner { q: usize },
}

impl UtilityConstruction {
    pub fn from_json(text: &str) -> Result<Self> {
        let c: UtilityConstruction =
            serde_json::from_str(text).map_err(|e| Error::InvalidInstance(format!("utility instance: {e}")))?;
        match &c {
            UtilityConstruction::Basic { kappa } => BasicUtilityGame::new(*kappa).map(|_| ())?,
            UtilityConstruction::Steiner { q } => SteinerGame::new(*q).map(|_| ())?,
        }
        Ok(c)
    }
}
