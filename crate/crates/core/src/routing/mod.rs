//! Unsplittable selfish routing with linear edge latencies.
//!
//! Each player sends one unit from `s_i` to `t_i` along a single path. The
//! engine sees one strategy per enumerated simple path and minimises
//! latency. [`lemmas`] samples flows and checks the inequalities behind the
//! constant-ratio results for depth-2 average-case lookahead.

mod game;
mod instance;
pub mod lemmas;

pub use game::{
    expected_step, lookahead_move_value, player_latency, total_latency, two_step_config, ExpectedStep, Flow,
    RoutingGame,
};
pub use instance::{
    enumerate_paths, random_instance, EdgeSpec, RandomRoutingParams, RoutingInstance, Terminals, DEFAULT_PATH_CAP,
};
pub use lemmas::{check_flow, verify_lemma_suite, LemmaReport, LemmaRow};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::*;

    fn edge(from: usize, to: usize, a: f64, b: f64) -> EdgeSpec {
        EdgeSpec { from, to, a, b }
    }

    #[test]
    fn parallel_edges_give_two_paths() {
        let inst = RoutingInstance::parallel_links(&[(1.0, 0.0), (0.0, 3.0)], 1).unwrap();
        assert_eq!(enumerate_paths(&inst, 0, DEFAULT_PATH_CAP).unwrap(), vec![vec![0], vec![1]]);
    }

    #[test]
    fn grid_has_two_monotone_paths() {
        // 0 1
        // 2 3
        let edges = vec![edge(0, 1, 1.0, 0.0), edge(0, 2, 1.0, 0.0), edge(1, 3, 1.0, 0.0), edge(2, 3, 1.0, 0.0)];
        let inst = RoutingInstance::new(4, edges, vec![Terminals { s: 0, t: 3 }]).unwrap();
        assert_eq!(enumerate_paths(&inst, 0, DEFAULT_PATH_CAP).unwrap(), vec![vec![0, 2], vec![1, 3]]);
    }

    #[test]
    fn cycles_are_not_followed() {
        let edges = vec![edge(0, 1, 1.0, 0.0), edge(1, 0, 1.0, 0.0), edge(1, 2, 1.0, 0.0)];
        let inst = RoutingInstance::new(3, edges, vec![Terminals { s: 0, t: 2 }]).unwrap();
        assert_eq!(enumerate_paths(&inst, 0, DEFAULT_PATH_CAP).unwrap(), vec![vec![0, 2]]);
    }

    #[test]
    fn path_cap_and_missing_path() {
        let inst = RoutingInstance::parallel_links(&[(1.0, 0.0); 5], 1).unwrap();
        assert_eq!(
            enumerate_paths(&inst, 0, 4).unwrap_err(),
            crate::Error::PathCapExceeded { player: 0, count: 5, cap: 4 }
        );
        let inst = RoutingInstance::new(3, vec![edge(0, 1, 1.0, 0.0)], vec![Terminals { s: 0, t: 2 }]).unwrap();
        assert!(enumerate_paths(&inst, 0, 10).is_err());
    }

    #[test]
    fn latencies_on_shared_edge() {
        let inst = RoutingInstance::parallel_links(&[(1.0, 0.0)], 1).unwrap();
        let g = RoutingGame::new(inst, DEFAULT_PATH_CAP).unwrap();
        let s = StateProfile::new(vec![0]);
        assert_eq!((player_latency(&g, &s, 0), total_latency(&g, &s)), (1.0, 1.0));
        let inst = RoutingInstance::parallel_links(&[(1.0, 0.0)], 2).unwrap();
        let g = RoutingGame::new(inst, DEFAULT_PATH_CAP).unwrap();
        let s = StateProfile::new(vec![0, 0]);
        assert_eq!(g.payoffs(&s), vec![2.0, 2.0]);
        assert_eq!(total_latency(&g, &s), 4.0);
    }

    #[test]
    fn single_player_lookahead_is_myopic_latency() {
        let inst = RoutingInstance::parallel_links(&[(1.0, 0.0), (0.0, 3.0)], 1).unwrap();
        let g = RoutingGame::new(inst, DEFAULT_PATH_CAP).unwrap();
        let s = StateProfile::new(vec![1]);
        // after moving to link 0 her own reply keeps her there
        assert_eq!(lookahead_move_value(&g, &s, 0, 0, PayoffModel::Leaf), 1.0);
        assert_eq!(lookahead_move_value(&g, &s, 0, 1, PayoffModel::Leaf), 1.0);
    }

    #[test]
    fn moving_off_shared_edge_is_lookahead_improving() {
        // Both players on link 0 (latency 2x, so 4 each); link 1 costs 1.5.
        // Staying: whichever player replies leaves, so player 0 ends at 1.5
        // or 2. Moving off: she pays 1.5 whatever the reply.
        let inst = RoutingInstance::parallel_links(&[(2.0, 0.0), (0.0, 1.5)], 2).unwrap();
        let g = RoutingGame::new(inst, DEFAULT_PATH_CAP).unwrap();
        let s = StateProfile::new(vec![0, 0]);
        assert_eq!(lookahead_move_value(&g, &s, 0, 0, PayoffModel::Leaf), 1.75);
        assert_eq!(lookahead_move_value(&g, &s, 0, 1, PayoffModel::Leaf), 1.5);
        let cfg = two_step_config(2, PayoffModel::Leaf);
        assert_eq!(lookahead_best_response(&g, &s, 0, &cfg).unwrap(), 1);
    }

    #[test]
    fn expensive_detour_is_not_worth_taking() {
        // With link 1 at 3 the detour costs 3 for sure, while staying costs
        // 3 or 2 depending on who replies.
        let inst = RoutingInstance::parallel_links(&[(2.0, 0.0), (0.0, 3.0)], 2).unwrap();
        let g = RoutingGame::new(inst, DEFAULT_PATH_CAP).unwrap();
        let s = StateProfile::new(vec![0, 0]);
        assert_eq!(lookahead_move_value(&g, &s, 0, 0, PayoffModel::Leaf), 2.5);
        assert_eq!(lookahead_move_value(&g, &s, 0, 1, PayoffModel::Leaf), 3.0);
        assert!(is_lookahead_equilibrium(&g, &s, &two_step_config(2, PayoffModel::Leaf)).unwrap());
    }

    #[test]
    fn flow_bookkeeping() {
        let inst = RoutingInstance::parallel_links(&[(1.0, 0.0), (2.0, 1.0)], 3).unwrap();
        let g = RoutingGame::new(inst, DEFAULT_PATH_CAP).unwrap();
        let mut f = Flow::new(&g, StateProfile::new(vec![0, 0, 1])).unwrap();
        f.move_player(&g, 1, 1).unwrap();
        assert_eq!(f.loads, g.loads(&f.choice));
        assert_eq!(f.total_latency(&g), total_latency(&g, &f.choice));
        assert!(f.move_player(&g, 0, 5).is_err());
    }

    #[test]
    fn json_round_trip() {
        let text = r#"{"nodes": 2, "edges": [{"from": 0, "to": 1, "a": 1, "b": 0}], "players": [{"s": 0, "t": 1}]}"#;
        let inst = RoutingInstance::from_json(text).unwrap();
        assert_eq!(inst.edges[0].a, 1.0);
        assert!(RoutingInstance::from_json(r#"{"nodes": 1, "edges": [], "players": [{"s": 0, "t": 0}]}"#).is_err());
    }
}
