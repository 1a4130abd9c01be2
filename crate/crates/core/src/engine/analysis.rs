use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::LookaheadConfig;
use super::eval::{Evaluator, ValueVector};
use super::game::{strictly_greater, FiniteGame, Game};
use crate::error::{Error, Result};

/// Default cap on the number of states any exhaustive routine will visit.
pub const DEFAULT_STATE_CAP: u128 = 10_000_000;

/// Searches `mover`'s lookahead tree at `state` and returns her chosen
/// strategy index and the root value vector.
pub fn evaluate_lookahead<G: Game>(
    game: &G,
    state: &G::State,
    mover: usize,
    cfg: &LookaheadConfig,
) -> Result<(usize, ValueVector)> {
    let e = Evaluator::new(game, cfg)?.evaluate(state, mover)?;
    Ok((e.best_strategy, e.root_value))
}

pub fn lookahead_best_response<G: Game>(
    game: &G,
    state: &G::State,
    player: usize,
    cfg: &LookaheadConfig,
) -> Result<usize> {
    Ok(evaluate_lookahead(game, state, player, cfg)?.0)
}

/// True iff every player's current state attains her maximal lookahead
/// payoff (compared by value, so equal-valued alternatives do not count).
pub fn is_lookahead_equilibrium<G: Game>(game: &G, state: &G::State, cfg: &LookaheadConfig) -> Result<bool> {
    let eval = Evaluator::new(game, cfg)?;
    is_equilibrium_with(&eval, state)
}

pub(crate) fn is_equilibrium_with<G: Game>(eval: &Evaluator<'_, G>, state: &G::State) -> Result<bool> {
    for player in 0..eval.game().num_players() {
        if !eval.is_content(state, player)? {
            return Ok(false);
        }
    }
    Ok(true)
}

fn check_cap(size: u128, cap: u128) -> Result<()> {
    if size > cap {
        Err(Error::StateSpaceTooLarge { size, cap })
    } else {
        Ok(())
    }
}

/// All lookahead equilibria, in the game's state order.
pub fn enumerate_equilibria<G>(game: &G, cfg: &LookaheadConfig, cap: u128) -> Result<Vec<G::State>>
where
    G: FiniteGame + Sync,
    G::State: Send + Sync,
{
    check_cap(game.state_count(), cap)?;
    cfg.validate(game.num_players())?;
    let states = game.states();
    let flags: Vec<Result<bool>> = states
        .par_iter()
        .map_init(
            || Evaluator::new(game, cfg).expect("validated above"),
            |eval, s| is_equilibrium_with(eval, s),
        )
        .collect();
    let mut out = Vec::new();
    for (s, flag) in states.into_iter().zip(flags) {
        if flag? {
            out.push(s);
        }
    }
    Ok(out)
}

/// Best social value over the whole state space.
pub fn social_optimum<G>(game: &G, cap: u128) -> Result<f64>
where
    G: FiniteGame,
{
    if let Some(opt) = game.known_optimum() {
        return Ok(opt);
    }
    check_cap(game.state_count(), cap)?;
    let sign = game.orientation().sign();
    game.states()
        .iter()
        .map(|s| game.social_value(s))
        .fold(None, |acc: Option<f64>, v| match acc {
            Some(a) if sign * a >= sign * v => Some(a),
            _ => Some(v),
        })
        .ok_or_else(|| Error::InvalidInstance("empty state space".into()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub from: usize,
    pub to: usize,
    /// The player whose move the edge represents.
    pub player: usize,
}

/// Improving lookahead best-response moves between states.
#[derive(Clone, Debug)]
pub struct LookaheadStateGraph<S> {
    pub nodes: Vec<S>,
    pub edges: Vec<Edge>,
}

impl<S> LookaheadStateGraph<S> {
    pub fn out_degree(&self) -> Vec<usize> {
        let mut deg = vec![0; self.nodes.len()];
        for e in &self.edges {
            deg[e.from] += 1;
        }
        deg
    }

    /// Node indices with no outgoing edge.
    pub fn sinks(&self) -> Vec<usize> {
        self.out_degree()
            .into_iter()
            .enumerate()
            .filter_map(|(i, d)| (d == 0).then_some(i))
            .collect()
    }
}

/// Builds the state graph: an edge (s, t, i) for every lookahead best
/// response t_i of player i at s that strictly improves on staying.
pub fn build_state_graph<G>(game: &G, cfg: &LookaheadConfig, cap: u128) -> Result<LookaheadStateGraph<G::State>>
where
    G: FiniteGame + Sync,
    G::State: Send + Sync,
{
    check_cap(game.state_count(), cap)?;
    cfg.validate(game.num_players())?;
    let nodes = game.states();
    let index: HashMap<&G::State, usize> = nodes.iter().enumerate().map(|(i, s)| (s, i)).collect();
    let sign = game.orientation().sign();
    let per_node: Vec<Result<Vec<Edge>>> = nodes
        .par_iter()
        .enumerate()
        .map_init(
            || Evaluator::new(game, cfg).expect("validated above"),
            |eval, (from, s)| {
                let mut edges = Vec::new();
                for player in 0..game.num_players() {
                    let e = eval.evaluate(s, player)?;
                    let best = e.best_score();
                    if !strictly_greater(sign * best, sign * e.stay_score) {
                        continue;
                    }
                    for (idx, t) in game.moves(s, player).iter().enumerate() {
                        let score = e.candidate_scores[idx];
                        if strictly_greater(sign * best, sign * score) || t == s {
                            continue;
                        }
                        let to = *index.get(t).ok_or(Error::NotClosed)?;
                        edges.push(Edge { from, to, player });
                    }
                }
                Ok(edges)
            },
        )
        .collect();
    let mut edges = Vec::new();
    for e in per_node {
        edges.extend(e?);
    }
    Ok(LookaheadStateGraph { nodes, edges })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryStep<S> {
    pub state: S,
    /// `None` for the starting state.
    pub mover: Option<usize>,
    pub social_value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trajectory<S> {
    pub steps: Vec<TrajectoryStep<S>>,
    pub seed: u64,
}

impl<S> Trajectory<S> {
    pub fn last_state(&self) -> &S {
        &self.steps.last().expect("trajectory holds at least the start").state
    }

    /// Mean social value over the steps after the first `burn_in`.
    pub fn mean_social_value(&self, burn_in: usize) -> f64 {
        let tail = &self.steps[burn_in.min(self.steps.len() - 1)..];
        tail.iter().map(|s| s.social_value).sum::<f64>() / tail.len() as f64
    }
}

/// Seeded random walk: each step a uniformly random player replaces her
/// strategy with her lookahead best response (she stays when staying is
/// already optimal).
pub fn random_walk<G: Game>(
    game: &G,
    start: &G::State,
    steps: usize,
    cfg: &LookaheadConfig,
    seed: u64,
) -> Result<Trajectory<G::State>> {
    let eval = Evaluator::new(game, cfg)?;
    walk_with(&eval, start, steps, seed)
}

pub(crate) fn walk_with<G: Game>(
    eval: &Evaluator<'_, G>,
    start: &G::State,
    steps: usize,
    seed: u64,
) -> Result<Trajectory<G::State>> {
    let game = eval.game();
    game.check_state(start)?;
    let n = game.num_players();
    let sign = game.orientation().sign();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = start.clone();
    let mut out = Vec::with_capacity(steps + 1);
    out.push(TrajectoryStep { state: state.clone(), mover: None, social_value: game.social_value(&state) });
    for _ in 0..steps {
        let player = rng.gen_range(0..n);
        let e = eval.evaluate(&state, player)?;
        if strictly_greater(sign * e.best_score(), sign * e.stay_score) {
            state = game.moves(&state, player).swap_remove(e.best_strategy);
        }
        out.push(TrajectoryStep {
            state: state.clone(),
            mover: Some(player),
            social_value: game.social_value(&state),
        });
    }
    Ok(Trajectory { steps: out, seed })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalkParams {
    pub steps: usize,
    /// Steps discarded from the front before averaging.
    pub burn_in: usize,
    pub seed: u64,
    /// Independent walks, seeded `seed, seed + 1, ...`.
    pub walks: usize,
}

impl Default for WalkParams {
    fn default() -> Self {
        WalkParams { steps: 200, burn_in: 50, seed: 0, walks: 1 }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum RatioMode<S> {
    /// Worst lookahead equilibrium against the optimum.
    Equilibria,
    /// Mean social value along random walks from `start`.
    Dynamics { start: S, walk: WalkParams },
}

/// Worst equilibrium social value against the optimum (>= 1).
pub fn equilibrium_ratio<G>(game: &G, cfg: &LookaheadConfig, cap: u128) -> Result<f64>
where
    G: FiniteGame + Sync,
    G::State: Send + Sync,
{
    let eqs = enumerate_equilibria(game, cfg, cap)?;
    let opt = social_optimum(game, cap)?;
    let orientation = game.orientation();
    eqs.iter()
        .map(|s| orientation.ratio(game.social_value(s), opt))
        .fold(None, |acc: Option<f64>, r| Some(acc.map_or(r, |a| a.max(r))))
        .ok_or(Error::NoEquilibrium)
}

/// Mean walk social value against `optimum` (>= 1).
pub fn dynamics_ratio<G>(game: &G, cfg: &LookaheadConfig, start: &G::State, walk: &WalkParams, optimum: f64) -> Result<f64>
where
    G: Game + Sync,
    G::State: Send + Sync,
{
    let walks = walk.walks.max(1);
    let means: Vec<Result<f64>> = (0..walks)
        .into_par_iter()
        .map(|w| {
            let t = random_walk(game, start, walk.steps, cfg, walk.seed.wrapping_add(w as u64))?;
            Ok(t.mean_social_value(walk.burn_in))
        })
        .collect();
    let mut total = 0.0;
    for m in means {
        total += m?;
    }
    Ok(game.orientation().ratio(total / walks as f64, optimum))
}

pub fn coordination_ratio<G>(game: &G, cfg: &LookaheadConfig, mode: &RatioMode<G::State>, cap: u128) -> Result<f64>
where
    G: FiniteGame + Sync,
    G::State: Send + Sync,
{
    match mode {
        RatioMode::Equilibria => equilibrium_ratio(game, cfg, cap),
        RatioMode::Dynamics { start, walk } => {
            let opt = social_optimum(game, cap)?;
            dynamics_ratio(game, cfg, start, walk, opt)
        }
    }
}
