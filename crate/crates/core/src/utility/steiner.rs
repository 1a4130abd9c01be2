use serde::{Deserialize, Serialize};

use crate::engine::{
    random_walk, Evaluator, Game, LookaheadConfig, OrderModel, Orientation, PayoffModel, StateProfile,
    WalkParams,
};
use crate::error::{Error, Result};

/// Lines of the projective plane of prime order `q`, each as a sorted list
/// of point indices. Points and lines are the normalised nonzero vectors of
/// GF(q)^3; a point lies on a line when their dot product vanishes.
pub fn projective_plane(q: usize) -> Result<Vec<Vec<usize>>> {
    if q < 2 || !(2..q).take_while(|d| d * d <= q).all(|d| !q.is_multiple_of(d)) {
        return Err(Error::InvalidInstance(format!("projective planes are built for prime q only, got {q}")));
    }
    let mut vecs = Vec::new();
    for a in 0..q {
        for b in 0..q {
            for c in 0..q {
                let v = [a, b, c];
                // normalised: first nonzero coordinate is 1
                if v.iter().find(|&&x| x != 0) == Some(&1) {
                    vecs.push(v);
                }
            }
        }
    }
    Ok(vecs
        .iter()
        .map(|l| {
            (0..vecs.len())
                .filter(|&p| (0..3).map(|i| l[i] * vecs[p][i]).sum::<usize>() % q == 0)
                .collect()
        })
        .collect())
}

/// Every pair of points lies in exactly one block.
pub fn is_pairwise_balanced(blocks: &[Vec<usize>], points: usize) -> bool {
    let mut seen = vec![vec![0u32; points]; points];
    for b in blocks {
        for (x, &i) in b.iter().enumerate() {
            for &j in &b[x + 1..] {
                seen[i][j] += 1;
            }
        }
    }
    (0..points).all(|i| (i + 1..points).all(|j| seen[i][j] == 1))
}

/// One sub-game per block of a Steiner system S(2, k, n). In each of her k
/// blocks a player is nice (1 point) or naughty with an index l in 1..=k;
/// a naughty player scores 2 when the indices of the block's naughty players
/// sum, mod k, to her position within the block.
///
/// A player's strategy is encoded as an integer whose base-(k+1) digits are
/// her choices (0 = nice, l = naughty with index l) in her blocks, listed in
/// block order.
#[derive(Clone, Debug, PartialEq)]
pub struct SteinerGame {
    q: usize,
    k: usize,
    blocks: Vec<Vec<usize>>,
    /// Per player: (block, position within block), in block order.
    memberships: Vec<Vec<(usize, usize)>>,
}

impl SteinerGame {
    pub fn new(q: usize) -> Result<Self> {
        let blocks = projective_plane(q)?;
        let n = blocks.len();
        let k = q + 1;
        if !is_pairwise_balanced(&blocks, n) || blocks.iter().any(|b| b.len() != k) {
            return Err(Error::InvalidInstance("block set is not a Steiner system".into()));
        }
        let mut memberships = vec![Vec::new(); n];
        for (g, b) in blocks.iter().enumerate() {
            for (pos, &p) in b.iter().enumerate() {
                memberships[p].push((g, pos));
            }
        }
        if memberships.iter().any(|m| m.len() != k) {
            return Err(Error::InvalidInstance("every player must lie in k blocks".into()));
        }
        Ok(SteinerGame { q, k, blocks, memberships })
    }

    pub fn fano() -> Self {
        SteinerGame::new(2).expect("the Fano plane is a Steiner system")
    }

    pub fn q(&self) -> usize {
        self.q
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn players(&self) -> usize {
        self.blocks.len()
    }

    /// Number of strategies of one player, (k+1)^k.
    pub fn strategy_count(&self) -> usize {
        (self.k + 1).pow(self.k as u32)
    }

    pub fn encode(&self, choices: &[usize]) -> usize {
        choices.iter().rev().fold(0, |acc, &c| acc * (self.k + 1) + c)
    }

    pub fn decode(&self, strategy: usize) -> Vec<usize> {
        let mut s = strategy;
        (0..self.k)
            .map(|_| {
                let c = s % (self.k + 1);
                s /= self.k + 1;
                c
            })
            .collect()
    }

    /// Choice of `player` in block `g`.
    fn choice(&self, state: &StateProfile, player: usize, g: usize) -> usize {
        let slot = self.memberships[player].iter().position(|&(b, _)| b == g).expect("player lies in block");
        (state[player] / (self.k + 1).pow(slot as u32)) % (self.k + 1)
    }

    /// Points earned in each block, per player of the block.
    pub fn block_scores(&self, state: &StateProfile, g: usize) -> Vec<f64> {
        let members = &self.blocks[g];
        let choices: Vec<usize> = members.iter().map(|&p| self.choice(state, p, g)).collect();
        let winner = choices.iter().sum::<usize>() % self.k;
        choices
            .iter()
            .enumerate()
            .map(|(pos, &c)| match c {
                0 => 1.0,
                _ if pos == winner => 2.0,
                _ => 0.0,
            })
            .collect()
    }

    pub fn all_nice(&self) -> StateProfile {
        StateProfile::new(vec![0; self.players()])
    }

    /// n (k + 1): in every block one winning naughty player and k - 1 nice ones.
    pub fn optimum(&self) -> f64 {
        (self.players() * (self.k + 1)) as f64
    }

    /// Naughty index that makes `player` the winner of block `g` given the
    /// other members' current choices.
    pub fn winning_index(&self, state: &StateProfile, player: usize, g: usize) -> usize {
        let pos = self.blocks[g].iter().position(|&p| p == player).expect("player lies in block");
        let others: usize = self.blocks[g].iter().filter(|&&p| p != player).map(|&p| self.choice(state, p, g)).sum();
        let l = (pos + self.k - others % self.k) % self.k;
        if l == 0 {
            self.k
        } else {
            l
        }
    }

    /// Upper bound on leaves in one depth-`depth` search.
    pub fn tree_size(&self, depth: usize) -> u128 {
        let branch = 1u128 << self.k;
        let per_ply = self.players() as u128 * branch;
        per_ply.saturating_pow(depth.saturating_sub(1) as u32).saturating_mul(branch)
    }
}

impl Game for SteinerGame {
    type State = StateProfile;

    fn num_players(&self) -> usize {
        self.players()
    }

    fn orientation(&self) -> Orientation {
        Orientation::Maximize
    }

    fn payoff(&self, player: usize, state: &StateProfile) -> f64 {
        self.memberships[player].iter().map(|&(g, pos)| self.block_scores(state, g)[pos]).sum()
    }

    fn payoffs(&self, state: &StateProfile) -> Vec<f64> {
        let mut out = vec![0.0; self.players()];
        for (g, members) in self.blocks.iter().enumerate() {
            for (pos, s) in self.block_scores(state, g).into_iter().enumerate() {
                out[members[pos]] += s;
            }
        }
        out
    }

    fn social_value(&self, state: &StateProfile) -> f64 {
        self.payoffs(state).iter().sum()
    }

    /// Per block, stay nice or turn naughty with the index that wins it:
    /// 2^k candidates.
    fn moves(&self, state: &StateProfile, player: usize) -> Vec<StateProfile> {
        let winning: Vec<usize> =
            self.memberships[player].iter().map(|&(g, _)| self.winning_index(state, player, g)).collect();
        (0..1usize << self.k)
            .map(|mask| {
                let choices: Vec<usize> =
                    (0..self.k).map(|b| if mask & (1 << b) != 0 { winning[b] } else { 0 }).collect();
                state.with(player, self.encode(&choices))
            })
            .collect()
    }

    fn check_state(&self, state: &StateProfile) -> Result<()> {
        crate::engine::check_profile(state, &vec![self.strategy_count(); self.players()])
    }

    fn known_optimum(&self) -> Option<f64> {
        Some(self.optimum())
    }
}

/// Depth-`depth` path-model search against adversarial movers.
pub fn steiner_config(game: &SteinerGame, depth: usize) -> LookaheadConfig {
    LookaheadConfig::uniform(game.players(), depth, PayoffModel::Path, OrderModel::Worst)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteinerRow {
    pub step: usize,
    pub social_value: f64,
    pub optimum: f64,
    /// Optimum over the current social value.
    pub ratio: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteinerDynamics {
    pub rows: Vec<SteinerRow>,
    /// Mean social value after burn-in.
    pub long_run_value: f64,
    pub optimum: f64,
    pub ratio: f64,
}

/// Seeded walk from the all-nice profile under `cfg`.
pub fn steiner_dynamics(game: &SteinerGame, cfg: &LookaheadConfig, walk: &WalkParams, cap: u128) -> Result<SteinerDynamics> {
    let size = game.tree_size(cfg.max_depth());
    if size > cap {
        return Err(Error::StateSpaceTooLarge { size, cap });
    }
    let t = random_walk(game, &game.all_nice(), walk.steps, cfg, walk.seed)?;
    let opt = game.optimum();
    let rows = t
        .steps
        .iter()
        .enumerate()
        .map(|(step, s)| SteinerRow {
            step,
            social_value: s.social_value,
            optimum: opt,
            ratio: Orientation::Maximize.ratio(s.social_value, opt),
        })
        .collect();
    let long_run_value = t.mean_social_value(walk.burn_in);
    Ok(SteinerDynamics { rows, long_run_value, optimum: opt, ratio: Orientation::Maximize.ratio(long_run_value, opt) })
}

/// Root value and immediate score of `mover` at `state`: her total over the
/// search horizon and the points she holds right after her own move.
pub fn guaranteed_scores(game: &SteinerGame, cfg: &LookaheadConfig, state: &StateProfile, mover: usize) -> Result<(f64, f64)> {
    let eval = Evaluator::new(game, cfg)?;
    let e = eval.evaluate(state, mover)?;
    let pv = eval.principal_variation(state, mover)?;
    Ok((e.root_value.get(mover), game.payoff(mover, &pv[0].state)))
}
