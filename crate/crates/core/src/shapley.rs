//! Network design with Shapley cost sharing: every player routes from one
//! source to one sink and each edge's cost is split equally among its users.

use serde::{Deserialize, Serialize};

use crate::engine::{
    all_profiles, check_profile, profile_count, profile_moves, random_walk, Evaluator, FiniteGame, Game,
    LookaheadConfig, MoverPool, OrderModel, Orientation, PayoffModel, StateProfile,
};
use crate::error::{Error, Result};
use crate::routing::{enumerate_paths, RoutingInstance};

/// `n` players choosing among explicit paths over a shared edge set.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapleyInstance {
    /// Fixed cost of each edge.
    pub costs: Vec<f64>,
    /// Candidate paths as edge-index lists.
    pub paths: Vec<Vec<usize>>,
    pub n: usize,
}

#[derive(Deserialize)]
struct LinkSpec {
    cost: f64,
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ShapleyJson {
    Links { paths: Vec<LinkSpec>, n: usize },
    Graph(RoutingInstance),
}

impl ShapleyInstance {
    pub fn new(costs: Vec<f64>, paths: Vec<Vec<usize>>, n: usize) -> Result<Self> {
        let inst = ShapleyInstance { costs, paths, n };
        inst.validate()?;
        Ok(inst)
    }

    /// One single-edge path per link.
    pub fn parallel_links(costs: &[f64], n: usize) -> Result<Self> {
        ShapleyInstance::new(costs.to_vec(), (0..costs.len()).map(|e| vec![e]).collect(), n)
    }

    /// Graph form: every player shares the same terminals and each edge has
    /// a fixed cost `b` (the load coefficient `a` must be zero).
    pub fn from_graph(graph: &RoutingInstance, path_cap: usize) -> Result<Self> {
        graph.validate()?;
        let term = graph.players[0];
        if graph.players.iter().any(|p| *p != term) {
            return Err(Error::InvalidInstance("all players must share one source and sink".into()));
        }
        if let Some(i) = graph.edges.iter().position(|e| e.a != 0.0) {
            return Err(Error::InvalidInstance(format!("edge {i} has a load-dependent term; use fixed costs only")));
        }
        let paths = enumerate_paths(graph, 0, path_cap)?;
        ShapleyInstance::new(graph.edges.iter().map(|e| e.b).collect(), paths, graph.players.len())
    }

    /// Accepts `{"paths": [{"cost": c}, ...], "n": n}` for parallel links or
    /// a routing graph with one terminal pair.
    pub fn from_json(text: &str, path_cap: usize) -> Result<Self> {
        match serde_json::from_str::<ShapleyJson>(text) {
            Ok(ShapleyJson::Links { paths, n }) => {
                ShapleyInstance::parallel_links(&paths.iter().map(|l| l.cost).collect::<Vec<_>>(), n)
            }
            Ok(ShapleyJson::Graph(g)) => ShapleyInstance::from_graph(&g, path_cap),
            Err(e) => Err(Error::InvalidInstance(format!("shapley instance: {e}"))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidInstance("at least one player is required".into()));
        }
        if self.paths.is_empty() {
            return Err(Error::InvalidInstance("at least one path is required".into()));
        }
        if let Some(i) = self.costs.iter().position(|c| !(c.is_finite() && *c >= 0.0)) {
            return Err(Error::InvalidInstance(format!("edge {i} needs a finite nonnegative cost")));
        }
        for (j, p) in self.paths.iter().enumerate() {
            if p.is_empty() || p.iter().any(|&e| e >= self.costs.len()) {
                return Err(Error::InvalidInstance(format!("path {j} must be a nonempty list of known edges")));
            }
        }
        Ok(())
    }

    pub fn path_cost(&self, path: usize) -> f64 {
        self.paths[path].iter().map(|&e| self.costs[e]).sum()
    }

    /// Cost of the cheapest path; every player on it is the social optimum.
    pub fn optimum(&self) -> f64 {
        (0..self.paths.len()).map(|p| self.path_cost(p)).fold(f64::INFINITY, f64::min)
    }

    pub fn cheapest_path(&self) -> usize {
        (0..self.paths.len()).fold(0, |best, p| if self.path_cost(p) < self.path_cost(best) { p } else { best })
    }

    /// Number of players using each edge.
    pub fn users(&self, profile: &StateProfile) -> Vec<u32> {
        let mut users = vec![0u32; self.costs.len()];
        for &p in profile.choices().iter() {
            for &e in &self.paths[p] {
                users[e] += 1;
            }
        }
        users
    }
}

/// Player's share: her path's edge costs, each divided by its user count.
pub fn shapley_cost(inst: &ShapleyInstance, profile: &StateProfile, player: usize) -> f64 {
    let users = inst.users(profile);
    inst.paths[profile[player]].iter().map(|&e| inst.costs[e] / f64::from(users[e])).sum()
}

/// Total cost of the edges in use.
pub fn total_cost(inst: &ShapleyInstance, profile: &StateProfile) -> f64 {
    inst.users(profile).iter().zip(&inst.costs).filter(|(u, _)| **u > 0).map(|(_, c)| c).sum()
}

impl Game for ShapleyInstance {
    type State = StateProfile;

    fn num_players(&self) -> usize {
        self.n
    }

    fn orientation(&self) -> Orientation {
        Orientation::Minimize
    }

    fn payoff(&self, player: usize, state: &StateProfile) -> f64 {
        shapley_cost(self, state, player)
    }

    fn payoffs(&self, state: &StateProfile) -> Vec<f64> {
        let users = self.users(state);
        state.choices().iter().map(|&p| self.paths[p].iter().map(|&e| self.costs[e] / f64::from(users[e])).sum()).collect()
    }

    fn social_value(&self, state: &StateProfile) -> f64 {
        total_cost(self, state)
    }

    fn moves(&self, state: &StateProfile, player: usize) -> Vec<StateProfile> {
        profile_moves(state, player, self.paths.len())
    }

    fn check_state(&self, state: &StateProfile) -> Result<()> {
        check_profile(state, &vec![self.paths.len(); self.n])
    }

    fn known_optimum(&self) -> Option<f64> {
        Some(self.optimum())
    }
}

impl FiniteGame for ShapleyInstance {
    fn state_count(&self) -> u128 {
        profile_count(&vec![self.paths.len(); self.n])
    }

    fn states(&self) -> Vec<StateProfile> {
        all_profiles(&vec![self.paths.len(); self.n])
    }
}

/// Depth-`k` leaf-model search under `order`, with the later moves made by
/// players who have not yet moved in the tree.
pub fn shapley_config(inst: &ShapleyInstance, k: usize, order: OrderModel) -> LookaheadConfig {
    LookaheadConfig::uniform(inst.n, k, PayoffModel::Leaf, order).with_pool(MoverPool::Distinct)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapleyRow {
    pub step: usize,
    pub total_cost: f64,
    pub optimum: f64,
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShapleyDynamics {
    pub rows: Vec<ShapleyRow>,
    pub final_ratio: f64,
    /// Mean cost over the second half of the walk, over the optimum.
    pub long_run_ratio: f64,
}

pub fn shapley_dynamics(
    inst: &ShapleyInstance,
    k: usize,
    order: OrderModel,
    start: &StateProfile,
    steps: usize,
    seed: u64,
) -> Result<ShapleyDynamics> {
    let t = random_walk(inst, start, steps, &shapley_config(inst, k, order), seed)?;
    let opt = inst.optimum();
    let ratio = |c: f64| Orientation::Minimize.ratio(c, opt);
    let rows: Vec<ShapleyRow> = t
        .steps
        .iter()
        .enumerate()
        .map(|(step, s)| ShapleyRow { step, total_cost: s.social_value, optimum: opt, ratio: ratio(s.social_value) })
        .collect();
    Ok(ShapleyDynamics {
        final_ratio: rows.last().expect("walk holds its start").ratio,
        long_run_ratio: ratio(t.mean_social_value(steps / 2)),
        rows,
    })
}

/// Brute-forces the depth-`k` tree in which players `0, 1, ..., k-1` move
/// in turn, from every profile, and reports whether the induced choices of
/// all `k` movers coincide.
pub fn consecutive_mover_claim_check(inst: &ShapleyInstance, k: usize, cap: u128) -> Result<bool> {
    if k == 0 || k > inst.n {
        return Err(Error::InvalidConfig(format!("need 1 <= k <= {}, got {k}", inst.n)));
    }
    let size = inst.state_count();
    if size > cap {
        return Err(Error::StateSpaceTooLarge { size, cap });
    }
    let cfg = shapley_config(inst, k, OrderModel::Fixed((1..k).collect()));
    let eval = Evaluator::new(inst, &cfg)?;
    for s in inst.states() {
        let pv = eval.principal_variation(&s, 0)?;
        if pv.iter().any(|c| c.strategy != pv[0].strategy) {
            return Ok(false);
        }
    }
    Ok(true)
}
