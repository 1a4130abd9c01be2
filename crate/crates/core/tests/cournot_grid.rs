//! The generic engine on a discretised Cournot game against the closed-form
//! reaction coefficients and a direct grid oracle.

use lookahead_core::cournot::{self, profit, CournotGrid};
use lookahead_core::engine::*;

fn alternating(depth: usize) -> LookaheadConfig {
    // root is player 0; later moves alternate 1, 0, 1, ...
    let seq = (0..depth.saturating_sub(1)).map(|i| if i % 2 == 0 { 1 } else { 0 }).collect();
    LookaheadConfig::uniform(2, depth, PayoffModel::Path, OrderModel::Fixed(seq))
}

/// Lowest index attaining the maximum, with the engine's relative tolerance.
fn argmax(values: &[f64]) -> usize {
    let m = values.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    values.iter().position(|&v| v >= m - TOLERANCE * m.abs().max(1.0)).unwrap()
}

/// Depth-3 alternating path-model reply computed directly from grid tables.
fn depth_three_oracle(grid: &CournotGrid, opp: usize) -> usize {
    let n = grid.points();
    let q = |i: usize| grid.quantity(i);
    let myopic: Vec<usize> = (0..n).map(|x| argmax(&(0..n).map(|r| profit(q(r), q(x))).collect::<Vec<_>>())).collect();
    let middle: Vec<usize> = (0..n)
        .map(|x| argmax(&(0..n).map(|r| profit(q(r), q(x)) + profit(q(r), q(myopic[r]))).collect::<Vec<_>>()))
        .collect();
    let values: Vec<f64> = (0..n)
        .map(|x| {
            let r = middle[x];
            profit(q(x), q(opp)) + profit(q(x), q(r)) + profit(q(myopic[r]), q(r))
        })
        .collect();
    argmax(&values)
}

#[test]
fn shallow_best_responses_within_one_step_of_reaction_function() {
    let grid = CournotGrid::new(400).unwrap();
    for depth in 1..=2 {
        let coeffs = cournot::coefficients(depth).unwrap();
        let eval = Evaluator::new(&grid, &alternating(depth)).unwrap();
        for opp in 0..grid.points() {
            let br = eval.evaluate(&StateProfile::new(vec![0, opp]), 0).unwrap().best_strategy;
            let target = coeffs.reaction(grid.quantity(opp)).clamp(0.0, 0.5);
            let got = grid.quantity(br);
            assert!(
                (got - target).abs() <= grid.step() + 1e-12,
                "depth {depth}, q_opp {}: engine {got}, closed form {target}",
                grid.quantity(opp)
            );
        }
    }
}

#[test]
fn depth_three_matches_grid_oracle() {
    // Rounding of the two inner replies moves the grid optimum up to about
    // three steps away from the continuous reaction line.
    let grid = CournotGrid::new(400).unwrap();
    let coeffs = cournot::coefficients(3).unwrap();
    let eval = Evaluator::new(&grid, &alternating(3)).unwrap();
    for opp in [0, 67, 133, 200] {
        let br = eval.evaluate(&StateProfile::new(vec![0, opp]), 0).unwrap().best_strategy;
        assert_eq!(br, depth_three_oracle(&grid, opp), "q_opp index {opp}");
        let target = coeffs.reaction(grid.quantity(opp)).clamp(0.0, 0.5);
        assert!((grid.quantity(br) - target).abs() <= 3.5 * grid.step());
    }
}

#[test]
fn two_step_reply_to_three_eighths() {
    // The follower's grid reply ties between two points and takes the lower,
    // which pulls the leader one step above 3/8.
    let grid = CournotGrid::new(400).unwrap();
    let state = StateProfile::new(vec![0, grid.nearest(0.375)]);
    let br = lookahead_best_response(&grid, &state, 0, &alternating(2)).unwrap();
    assert!(br.abs_diff(grid.nearest(0.375)) <= 1);
}

#[test]
fn leaf_model_asymmetric_depths_give_stackelberg() {
    let grid = CournotGrid::new(400).unwrap();
    let mut cfg = LookaheadConfig::uniform(2, 1, PayoffModel::Leaf, OrderModel::Fixed(vec![1]));
    cfg.depth[0] = 2;
    let (leader, follower) = cournot::stackelberg_check();
    // leader's choice does not depend on where the follower currently is
    for opp in [0, 50, 133] {
        let br = lookahead_best_response(&grid, &StateProfile::new(vec![0, opp]), 0, &cfg).unwrap();
        assert!(br.abs_diff(grid.nearest(leader)) <= 1);
    }
    let reply = lookahead_best_response(&grid, &StateProfile::new(vec![grid.nearest(leader), 0]), 1, &cfg).unwrap();
    assert_eq!(grid.quantity(reply), follower);
}
