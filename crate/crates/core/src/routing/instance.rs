use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on simple paths enumerated per player.
pub const DEFAULT_PATH_CAP: usize = 10_000;

/// Directed edge with latency `a * load + b`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgeSpec {
    pub from: usize,
    pub to: usize,
    pub a: f64,
    pub b: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Terminals {
    pub s: usize,
    pub t: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RoutingInstance {
    pub nodes: usize,
    pub edges: Vec<EdgeSpec>,
    pub players: Vec<Terminals>,
}

impl RoutingInstance {
    pub fn new(nodes: usize, edges: Vec<EdgeSpec>, players: Vec<Terminals>) -> Result<Self> {
        let inst = RoutingInstance { nodes, edges, players };
        inst.validate()?;
        Ok(inst)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let inst: RoutingInstance =
            serde_json::from_str(text).map_err(|e| Error::InvalidInstance(format!("routing instance: {e}")))?;
        inst.validate()?;
        Ok(inst)
    }

    /// `n` players sharing terminals over parallel `s -> t` links.
    pub fn parallel_links(links: &[(f64, f64)], n: usize) -> Result<Self> {
        let edges = links.iter().map(|&(a, b)| EdgeSpec { from: 0, to: 1, a, b }).collect();
        RoutingInstance::new(2, edges, vec![Terminals { s: 0, t: 1 }; n])
    }

    pub fn validate(&self) -> Result<()> {
        if self.players.is_empty() {
            return Err(Error::InvalidInstance("at least one player is required".into()));
        }
        for (i, e) in self.edges.iter().enumerate() {
            if e.from >= self.nodes || e.to >= self.nodes {
                return Err(Error::InvalidInstance(format!("edge {i} has an endpoint outside 0..{}", self.nodes)));
            }
            if !(e.a.is_finite() && e.b.is_finite() && e.a >= 0.0 && e.b >= 0.0) {
                return Err(Error::InvalidInstance(format!("edge {i} needs finite nonnegative coefficients")));
            }
        }
        for (i, p) in self.players.iter().enumerate() {
            if p.s >= self.nodes || p.t >= self.nodes || p.s == p.t {
                return Err(Error::InvalidInstance(format!("player {i} needs distinct terminals inside the graph")));
            }
        }
        Ok(())
    }

    pub fn num_players(&self) -> usize {
        self.players.len()
    }

    pub fn latency(&self, edge: usize, load: u32) -> f64 {
        let e = &self.edges[edge];
        e.a * f64::from(load) + e.b
    }
}

/// All simple `s_i -> t_i` paths as edge-index lists. Outgoing edges are
/// tried in index order, so paths come out lexicographically by edge index.
pub fn enumerate_paths(inst: &RoutingInstance, player: usize, cap: usize) -> Result<Vec<Vec<usize>>> {
    let term = *inst
        .players
        .get(player)
        .ok_or(Error::InvalidPlayer { player, players: inst.num_players() })?;
    let mut out_edges = vec![Vec::new(); inst.nodes];
    for (i, e) in inst.edges.iter().enumerate() {
        out_edges[e.from].push(i);
    }
    let mut paths = Vec::new();
    let mut on_path = vec![false; inst.nodes];
    let mut stack = Vec::new();
    on_path[term.s] = true;
    dfs(inst, &out_edges, term.s, term.t, &mut on_path, &mut stack, &mut paths, cap, player)?;
    if paths.is_empty() {
        return Err(Error::InvalidInstance(format!("player {player} has no path from {} to {}", term.s, term.t)));
    }
    Ok(paths)
}

#[allow(clippy::too_many_arguments)]
fn dfs(
    inst: &RoutingInstance,
    out_edges: &[Vec<usize>],
    node: usize,
    target: usize,
    on_path: &mut [bool],
    stack: &mut Vec<usize>,
    paths: &mut Vec<Vec<usize>>,
    cap: usize,
    player: usize,
) -> Result<()> {
    if node == target {
        if paths.len() == cap {
            return Err(Error::PathCapExceeded { player, count: cap + 1, cap });
        }
        paths.push(stack.clone());
        return Ok(());
    }
    for &e in &out_edges[node] {
        let next = inst.edges[e].to;
        if on_path[next] {
            continue;
        }
        on_path[next] = true;
        stack.push(e);
        dfs(inst, out_edges, next, target, on_path, stack, paths, cap, player)?;
        stack.pop();
        on_path[next] = false;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomRoutingParams {
    pub players: usize,
    pub nodes: usize,
    /// Probability of each forward edge beyond the backbone chain.
    pub edge_prob: f64,
    pub a_max: u32,
    pub b_max: u32,
}

impl Default for RandomRoutingParams {
    fn default() -> Self {
        RandomRoutingParams { players: 3, nodes: 5, edge_prob: 0.4, a_max: 4, b_max: 12 }
    }
}

/// Random DAG on `nodes` nodes: a backbone chain `0 -> 1 -> ... ` plus
/// random forward edges, integer coefficients with `a + b > 0`. Player
/// terminals are random ordered pairs, so every player has a path.
pub fn random_instance<R: Rng>(rng: &mut R, params: &RandomRoutingParams) -> RoutingInstance {
    let m = params.nodes.max(2);
    let mut edges = Vec::new();
    let coeffs = |rng: &mut R| loop {
        let a = f64::from(rng.gen_range(0..=params.a_max));
        let b = f64::from(rng.gen_range(0..=params.b_max));
        if a + b > 0.0 {
            return (a, b);
        }
    };
    for u in 0..m {
        for v in u + 1..m {
            if v == u + 1 || rng.gen_bool(params.edge_prob) {
                let (a, b) = coeffs(rng);
                edges.push(EdgeSpec { from: u, to: v, a, b });
            }
        }
    }
    let players = (0..params.players.max(1))
        .map(|_| {
            let s = rng.gen_range(0..m - 1);
            let t = rng.gen_range(s + 1..m);
            Terminals { s, t }
        })
        .collect();
    RoutingInstance { nodes: m, edges, players }
}
