//! k-lookahead game playing: a generic search engine over finite strategic
//! games plus the auction, duopoly, routing, utility and network design
//! families it is exercised on.

pub mod cournot;
pub mod engine;
pub mod error;
pub mod gsp;
pub mod routing;
pub mod shapley;
pub mod utility;

pub use engine::{
    evaluate_lookahead, is_lookahead_equilibrium, lookahead_best_response, FiniteGame, Game, GameDescription,
    LookaheadConfig, MoverPool, OrderModel, Orientation, PayoffModel, StateProfile, Trajectory, ValueVector,
};
pub use error::{Error, Result};
