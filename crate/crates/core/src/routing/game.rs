use serde::{Deserialize, Serialize};

use super::instance::{enumerate_paths, RoutingInstance};
use crate::engine::{
    all_profiles, check_profile, profile_count, profile_moves, Evaluator, FiniteGame, Game, LookaheadConfig,
    OrderModel, Orientation, PayoffModel, StateProfile,
};
use crate::error::{Error, Result};

/// Unsplittable routing game; a state picks one enumerated path per player.
#[derive(Clone, Debug)]
pub struct RoutingGame {
    inst: RoutingInstance,
    paths: Vec<Vec<Vec<usize>>>,
    counts: Vec<usize>,
}

impl RoutingGame {
    pub fn new(inst: RoutingInstance, path_cap: usize) -> Result<Self> {
        inst.validate()?;
        let paths = (0..inst.num_players()).map(|p| enumerate_paths(&inst, p, path_cap)).collect::<Result<Vec<_>>>()?;
        let counts = paths.iter().map(Vec::len).collect();
        Ok(RoutingGame { inst, paths, counts })
    }

    pub fn instance(&self) -> &RoutingInstance {
        &self.inst
    }

    pub fn paths(&self, player: usize) -> &[Vec<usize>] {
        &self.paths[player]
    }

    pub fn path_counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn path_of(&self, state: &StateProfile, player: usize) -> &[usize] {
        &self.paths[player][state[player]]
    }

    pub fn loads(&self, state: &StateProfile) -> Vec<u32> {
        let mut loads = vec![0u32; self.inst.edges.len()];
        for p in 0..self.inst.num_players() {
            for &e in self.path_of(state, p) {
                loads[e] += 1;
            }
        }
        loads
    }

    fn path_latency(&self, path: &[usize], loads: &[u32]) -> f64 {
        path.iter().map(|&e| self.inst.latency(e, loads[e])).sum()
    }

    /// Optimal total latency by enumerating every profile.
    pub fn optimum(&self, cap: u128) -> Result<f64> {
        crate::engine::social_optimum(self, cap)
    }
}

/// l_i(f): the latency along player i's path.
pub fn player_latency(game: &RoutingGame, state: &StateProfile, player: usize) -> f64 {
    game.path_latency(game.path_of(state, player), &game.loads(state))
}

/// l(f) = sum over edges of latency times load.
pub fn total_latency(game: &RoutingGame, state: &StateProfile) -> f64 {
    game.loads(state).iter().enumerate().map(|(e, &f)| game.inst.latency(e, f) * f64::from(f)).sum()
}

impl Game for RoutingGame {
    type State = StateProfile;

    fn num_players(&self) -> usize {
        self.inst.num_players()
    }

    fn orientation(&self) -> Orientation {
        Orientation::Minimize
    }

    fn payoff(&self, player: usize, state: &StateProfile) -> f64 {
        player_latency(self, state, player)
    }

    fn payoffs(&self, state: &StateProfile) -> Vec<f64> {
        let loads = self.loads(state);
        (0..self.num_players()).map(|p| self.path_latency(self.path_of(state, p), &loads)).collect()
    }

    fn social_value(&self, state: &StateProfile) -> f64 {
        total_latency(self, state)
    }

    fn moves(&self, state: &StateProfile, player: usize) -> Vec<StateProfile> {
        profile_moves(state, player, self.counts[player])
    }

    fn check_state(&self, state: &StateProfile) -> Result<()> {
        check_profile(state, &self.counts)
    }
}

impl FiniteGame for RoutingGame {
    fn state_count(&self) -> u128 {
        profile_count(&self.counts)
    }

    fn states(&self) -> Vec<StateProfile> {
        all_profiles(&self.counts)
    }
}

/// Path choices with edge loads maintained incrementally.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Flow {
    pub choice: StateProfile,
    pub loads: Vec<u32>,
}

impl Flow {
    pub fn new(game: &RoutingGame, choice: StateProfile) -> Result<Self> {
        game.check_state(&choice)?;
        let loads = game.loads(&choice);
        Ok(Flow { choice, loads })
    }

    pub fn move_player(&mut self, game: &RoutingGame, player: usize, path: usize) -> Result<()> {
        if path >= game.counts[player] {
            return Err(Error::InvalidState(format!("player {player} has no path {path}")));
        }
        for &e in &game.paths[player][self.choice[player]] {
            self.loads[e] -= 1;
        }
        for &e in &game.paths[player][path] {
            self.loads[e] += 1;
        }
        self.choice = self.choice.with(player, path);
        Ok(())
    }

    pub fn player_latency(&self, game: &RoutingGame, player: usize) -> f64 {
        game.path_latency(&game.paths[player][self.choice[player]], &self.loads)
    }

    pub fn total_latency(&self, game: &RoutingGame) -> f64 {
        self.loads.iter().enumerate().map(|(e, &f)| game.inst.latency(e, f) * f64::from(f)).sum()
    }
}

/// Depth-2 average-case configuration used throughout the routing analysis.
pub fn two_step_config(players: usize, model: PayoffModel) -> LookaheadConfig {
    LookaheadConfig::uniform(players, 2, model, OrderModel::Average)
}

fn myopic_reply(game: &RoutingGame, state: &StateProfile, player: usize) -> StateProfile {
    let mut best = state.with(player, 0);
    let mut best_lat = player_latency(game, &best, player);
    for x in 1..game.counts[player] {
        let cand = state.with(player, x);
        let lat = player_latency(game, &cand, player);
        if Orientation::Minimize.improves(lat, best_lat) {
            best = cand;
            best_lat = lat;
        }
    }
    best
}

/// Expected cost to `player` of switching to path `candidate`: the mean of
/// her latency after each of the n players, equally likely, plays a myopic
/// best response (leaf), or that mean averaged with her immediate latency
/// (path). Computed directly rather than through the engine.
pub fn lookahead_move_value(
    game: &RoutingGame,
    state: &StateProfile,
    player: usize,
    candidate: usize,
    model: PayoffModel,
) -> f64 {
    let after = state.with(player, candidate);
    let n = game.num_players();
    let expected = (0..n).map(|j| player_latency(game, &myopic_reply(game, &after, j), player)).sum::<f64>() / n as f64;
    match model {
        PayoffModel::Leaf => expected,
        PayoffModel::Path => 0.5 * player_latency(game, &after, player) + 0.5 * expected,
    }
}

/// Outcome of one step in which a uniformly random player makes her
/// lookahead best response.
#[derive(Clone, Debug, PartialEq)]
pub struct ExpectedStep {
    /// State after player i moves (unchanged if staying is already best).
    pub successors: Vec<StateProfile>,
    pub improving: Vec<bool>,
    /// E l(f').
    pub expected_total: f64,
    /// E l_i(f'_i), the mover's own latency after her move.
    pub expected_mover_latency: f64,
}

pub fn expected_step(eval: &Evaluator<'_, RoutingGame>, state: &StateProfile) -> Result<ExpectedStep> {
    let game = eval.game();
    let n = game.num_players();
    let mut successors = Vec::with_capacity(n);
    let mut improving = Vec::with_capacity(n);
    for i in 0..n {
        let e = eval.evaluate(state, i)?;
        let better = Orientation::Minimize.improves(e.best_score(), e.stay_score);
        improving.push(better);
        successors.push(if better { state.with(i, e.best_strategy) } else { state.clone() });
    }
    let expected_total = successors.iter().map(|s| total_latency(game, s)).sum::<f64>() / n as f64;
    let expected_mover_latency =
        successors.iter().enumerate().map(|(i, s)| player_latency(game, s, i)).sum::<f64>() / n as f64;
    Ok(ExpectedStep { successors, improving, expected_total, expected_mover_latency })
}
