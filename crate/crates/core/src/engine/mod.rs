//! Generic k-lookahead search.
//!
//! A player about to move grows a depth-k tree of future states rooted at the
//! current one and values it by backward induction. At a node where player
//! `p` moves, `p` picks the child maximising her own reward plus subtree
//! value; everyone else inherits the values of that child. Leaves carry the
//! players' payoffs (leaf model), or every move earns the payoff of the state
//! it produces (path model). When the next mover is not known, the
//! [`OrderModel`] decides: a uniform mixture over movers, the mover an
//! adversary picks, or a fixed schedule.

mod analysis;
mod config;
mod eval;
mod game;

pub use analysis::{
    build_state_graph, coordination_ratio, dynamics_ratio, enumerate_equilibria, equilibrium_ratio,
    evaluate_lookahead, is_lookahead_equilibrium, lookahead_best_response, random_walk, social_optimum, Edge,
    LookaheadStateGraph, RatioMode, Trajectory, TrajectoryStep, WalkParams, DEFAULT_STATE_CAP,
};
pub use config::{LookaheadConfig, MoverPool, OrderModel, PayoffModel};
pub use eval::{Evaluation, Evaluator, PlyChoice, ValueVector};
pub use game::{
    all_profiles, check_profile, profile_count, profile_index, profile_moves, FiniteGame, Game, GameDescription,
    Orientation, StateProfile, TOLERANCE,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    fn matching_game() -> GameDescription {
        GameDescription::utilitarian(&[2, 2], Orientation::Maximize, |_, s| if s[0] == s[1] { 1.0 } else { 0.0 })
            .unwrap()
    }

    #[test]
    fn matching_game_path_model_depth_two() {
        let g = matching_game();
        let cfg = LookaheadConfig::uniform(2, 2, PayoffModel::Path, OrderModel::Fixed(vec![1]));
        let (best, value) = evaluate_lookahead(&g, &StateProfile::new(vec![0, 1]), 0, &cfg).unwrap();
        assert_eq!(best, 1);
        assert_eq!(value.0, vec![2.0, 2.0]);
    }

    #[test]
    fn depth_one_is_myopic() {
        let g = GameDescription::utilitarian(&[3, 2], Orientation::Maximize, |p, s| {
            (s[0] * 2 + s[1] + p) as f64 % 3.0
        })
        .unwrap();
        let cfg = LookaheadConfig::myopic(2);
        let s = StateProfile::new(vec![0, 0]);
        // payoff_0(x, 0) = 2x mod 3 -> 0, 2, 1
        assert_eq!(lookahead_best_response(&g, &s, 0, &cfg).unwrap(), 1);
    }

    #[test]
    fn all_equal_payoffs_make_every_node_a_sink() {
        let g = GameDescription::utilitarian(&[2, 3], Orientation::Maximize, |_, _| 1.0).unwrap();
        for order in [OrderModel::Average, OrderModel::Worst] {
            let cfg = LookaheadConfig::uniform(2, 2, PayoffModel::Leaf, order);
            let graph = build_state_graph(&g, &cfg, DEFAULT_STATE_CAP).unwrap();
            assert!(graph.edges.is_empty());
            assert_eq!(graph.sinks().len(), 6);
        }
    }

    #[test]
    fn matching_game_depth_one_sinks_are_nash_profiles() {
        let g = matching_game();
        let graph = build_state_graph(&g, &LookaheadConfig::myopic(2), DEFAULT_STATE_CAP).unwrap();
        let sinks: Vec<_> = graph.sinks().into_iter().map(|i| graph.nodes[i].clone()).collect();
        assert_eq!(sinks, vec![StateProfile::new(vec![0, 0]), StateProfile::new(vec![1, 1])]);
    }

    #[test]
    fn zero_step_walk_is_start_state() {
        let g = matching_game();
        let start = StateProfile::new(vec![0, 1]);
        let t = random_walk(&g, &start, 0, &LookaheadConfig::myopic(2), 7).unwrap();
        assert_eq!(t.steps.len(), 1);
        assert_eq!(t.steps[0].state, start);
        assert_eq!(t.steps[0].mover, None);
    }

    #[test]
    fn single_state_game_has_ratio_one() {
        let g = GameDescription::utilitarian(&[1, 1], Orientation::Maximize, |_, _| 3.0).unwrap();
        let cfg = LookaheadConfig::uniform(2, 2, PayoffModel::Leaf, OrderModel::Average);
        assert_eq!(equilibrium_ratio(&g, &cfg, DEFAULT_STATE_CAP).unwrap(), 1.0);
        let mode = RatioMode::Dynamics { start: StateProfile::new(vec![0, 0]), walk: WalkParams::default() };
        assert_eq!(coordination_ratio(&g, &cfg, &mode, DEFAULT_STATE_CAP).unwrap(), 1.0);
    }

    #[test]
    fn one_player_equilibria_maximise_own_payoff() {
        let g = GameDescription::utilitarian(&[4], Orientation::Maximize, |_, s| [1.0, 3.0, 0.0, 3.0][s[0]]).unwrap();
        let eqs = enumerate_equilibria(&g, &LookaheadConfig::myopic(1), DEFAULT_STATE_CAP).unwrap();
        assert_eq!(eqs, vec![StateProfile::new(vec![1]), StateProfile::new(vec![3])]);
        // at depth 2 the player's own follow-up move reaches the optimum from anywhere
        let cfg = LookaheadConfig::uniform(1, 2, PayoffModel::Leaf, OrderModel::Average);
        assert_eq!(enumerate_equilibria(&g, &cfg, DEFAULT_STATE_CAP).unwrap().len(), 4);
    }

    #[test]
    fn cap_is_enforced() {
        let g = GameDescription::utilitarian(&[10, 10, 10], Orientation::Maximize, |_, _| 0.0).unwrap();
        let cfg = LookaheadConfig::myopic(3);
        assert_eq!(
            enumerate_equilibria(&g, &cfg, 999).unwrap_err(),
            Error::StateSpaceTooLarge { size: 1000, cap: 999 }
        );
        assert!(build_state_graph(&g, &cfg, 999).is_err());
    }

    #[test]
    fn no_equilibrium_is_reported() {
        // matching pennies has no pure equilibrium
        let g = GameDescription::utilitarian(&[2, 2], Orientation::Maximize, |p, s| {
            let same = s[0] == s[1];
            if (p == 0) == same { 1.0 } else { -1.0 }
        })
        .unwrap();
        let cfg = LookaheadConfig::myopic(2);
        assert_eq!(equilibrium_ratio(&g, &cfg, DEFAULT_STATE_CAP), Err(Error::NoEquilibrium));
    }

    #[test]
    fn invalid_mover_and_state() {
        let g = matching_game();
        let cfg = LookaheadConfig::myopic(2);
        let s = StateProfile::new(vec![0, 0]);
        assert_eq!(
            evaluate_lookahead(&g, &s, 2, &cfg).unwrap_err(),
            Error::InvalidPlayer { player: 2, players: 2 }
        );
        assert!(evaluate_lookahead(&g, &StateProfile::new(vec![0, 5]), 0, &cfg).is_err());
    }

    #[test]
    fn minimising_game_swaps_direction() {
        let g = GameDescription::utilitarian(&[3], Orientation::Minimize, |_, s| [4.0, 1.0, 2.0][s[0]]).unwrap();
        assert_eq!(lookahead_best_response(&g, &StateProfile::new(vec![0]), 0, &LookaheadConfig::myopic(1)).unwrap(), 1);
    }

    #[test]
    fn principal_variation_follows_fixed_order() {
        let g = matching_game();
        let cfg = LookaheadConfig::uniform(2, 3, PayoffModel::Path, OrderModel::Fixed(vec![1, 0]));
        let eval = Evaluator::new(&g, &cfg).unwrap();
        let pv = eval.principal_variation(&StateProfile::new(vec![0, 1]), 0).unwrap();
        assert_eq!(pv.len(), 3);
        assert_eq!(pv.iter().map(|c| c.mover).collect::<Vec<_>>(), vec![0, 1, 0]);
    }
}
