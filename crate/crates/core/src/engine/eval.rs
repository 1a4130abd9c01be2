use std::cell::RefCell;
use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::config::{LookaheadConfig, MoverPool, OrderModel, PayoffModel};
use super::game::{strictly_greater, Game};
use crate::error::{Error, Result};

/// Per-player lookahead values at a tree node.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ValueVector(pub Vec<f64>);

impl ValueVector {
    pub fn zeros(n: usize) -> Self {
        ValueVector(vec![0.0; n])
    }

    pub fn get(&self, player: usize) -> f64 {
        self.0[player]
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn add_assign(&mut self, other: &ValueVector) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a += b;
        }
    }
}

/// Result of searching from a root state for one mover.
#[derive(Clone, Debug, PartialEq)]
pub struct Evaluation {
    /// Index (into `Game::moves`) of the mover's chosen candidate.
    pub best_strategy: usize,
    /// Value vector of the root under the chosen candidate.
    pub root_value: ValueVector,
    /// The mover's lookahead payoff for every candidate.
    pub candidate_scores: Vec<f64>,
    /// The mover's lookahead payoff for keeping the current state.
    pub stay_score: f64,
}

impl Evaluation {
    pub fn best_score(&self) -> f64 {
        self.candidate_scores[self.best_strategy]
    }
}

/// One step of the induced play below the root.
#[derive(Clone, Debug, PartialEq)]
pub struct PlyChoice<S> {
    pub mover: usize,
    pub strategy: usize,
    pub state: S,
}

const NO_PLAYER: usize = usize::MAX;
const MEMO_LIMIT: usize = 1 << 21;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Ctx {
    root: usize,
    ply: usize,
    remaining: usize,
    last: usize,
    used: u64,
    perspective: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Key<S> {
    state: S,
    ctx: Ctx,
}

/// Backward-induction evaluator for one game and configuration.
///
/// Interior node values are memoised; the table is private to this value, so
/// concurrent searches use one evaluator each.
pub struct Evaluator<'g, G: Game> {
    game: &'g G,
    cfg: LookaheadConfig,
    sign: f64,
    n: usize,
    memo: RefCell<HashMap<Key<G::State>, ValueVector>>,
}

impl<'g, G: Game> Evaluator<'g, G> {
    pub fn new(game: &'g G, cfg: &LookaheadConfig) -> Result<Self> {
        let n = game.num_players();
        cfg.validate(n)?;
        Ok(Evaluator {
            game,
            cfg: cfg.clone(),
            sign: game.orientation().sign(),
            n,
            memo: RefCell::new(HashMap::new()),
        })
    }

    pub fn game(&self) -> &'g G {
        self.game
    }

    pub fn config(&self) -> &LookaheadConfig {
        &self.cfg
    }

    fn check(&self, state: &G::State, mover: usize) -> Result<()> {
        if mover >= self.n {
            return Err(Error::InvalidPlayer { player: mover, players: self.n });
        }
        self.game.check_state(state)
    }

    /// Searches the mover's depth-k tree rooted at `state`.
    pub fn evaluate(&self, state: &G::State, mover: usize) -> Result<Evaluation> {
        self.check(state, mover)?;
        if self.memo.borrow().len() > MEMO_LIMIT {
            self.memo.borrow_mut().clear();
        }
        let root = self.root_ctx(mover);
        let children = self.game.moves(state, mover);
        if children.is_empty() {
            return Err(Error::InvalidState(format!("player {mover} has no moves")));
        }
        let mut scores = Vec::with_capacity(children.len());
        let mut best: Option<(usize, ValueVector)> = None;
        for (idx, child) in children.iter().enumerate() {
            let w = self.after_move(child, mover, root);
            let score = w.get(mover);
            scores.push(score);
            let replace = match &best {
                None => true,
                Some((_, bw)) => strictly_greater(self.sign * score, self.sign * bw.get(mover)),
            };
            if replace {
                best = Some((idx, w));
            }
        }
        let stay_score = self.after_move(state, mover, root).get(mover);
        let (best_strategy, root_value) = best.expect("non-empty candidate list");
        Ok(Evaluation { best_strategy, root_value, candidate_scores: scores, stay_score })
    }

    /// Whether the mover's current state already attains her best lookahead
    /// payoff.
    pub fn is_content(&self, state: &G::State, mover: usize) -> Result<bool> {
        let e = self.evaluate(state, mover)?;
        Ok(!strictly_greater(self.sign * e.best_score(), self.sign * e.stay_score))
    }

    /// The sequence of moves the root mover expects below her chosen
    /// candidate. Defined for the fixed, round-robin and worst-case orders;
    /// under the worst-case order this is the adversary's path against the
    /// root mover.
    pub fn principal_variation(&self, state: &G::State, mover: usize) -> Result<Vec<PlyChoice<G::State>>> {
        if self.cfg.order_model == OrderModel::Average {
            return Err(Error::InvalidConfig(
                "average-case trees have no single induced path".into(),
            ));
        }
        let eval = self.evaluate(state, mover)?;
        let mut cur = self.game.moves(state, mover)[eval.best_strategy].clone();
        let mut path = vec![PlyChoice { mover, strategy: eval.best_strategy, state: cur.clone() }];
        let mut ctx = self.child_ctx(self.root_ctx(mover), mover);
        while ctx.remaining > 0 {
            let (next_mover, strategy, next) = match &self.cfg.order_model {
                OrderModel::Worst => {
                    let (j, strategy, next, _) = self.worst_pick(&cur, ctx);
                    (j, strategy, next)
                }
                _ => {
                    let j = self.known_mover(ctx);
                    let (strategy, next, _) = self.choose(&cur, j, ctx);
                    (j, strategy, next)
                }
            };
            path.push(PlyChoice { mover: next_mover, strategy, state: next.clone() });
            ctx = self.child_ctx(ctx, next_mover);
            cur = next;
        }
        Ok(path)
    }

    fn root_ctx(&self, mover: usize) -> Ctx {
        Ctx {
            root: mover,
            ply: 0,
            remaining: self.cfg.depth[mover],
            last: NO_PLAYER,
            used: 0,
            perspective: mover,
        }
    }

    fn child_ctx(&self, ctx: Ctx, mover: usize) -> Ctx {
        Ctx {
            root: ctx.root,
            ply: ctx.ply + 1,
            remaining: ctx.remaining - 1,
            last: mover,
            used: if mover < 64 { ctx.used | (1u64 << mover) } else { ctx.used },
            perspective: ctx.perspective,
        }
    }

    fn reward(&self, state: &G::State) -> ValueVector {
        match self.cfg.payoff_model {
            PayoffModel::Path => self.payoffs(state),
            PayoffModel::Leaf => ValueVector::zeros(self.n),
        }
    }

    fn payoffs(&self, state: &G::State) -> ValueVector {
        ValueVector(self.game.payoffs(state))
    }

    /// Value of moving into `child`: its reward plus the value of the
    /// subtree below it.
    fn after_move(&self, child: &G::State, mover: usize, ctx: Ctx) -> ValueVector {
        let mut w = self.reward(child);
        w.add_assign(&self.node_value(child, self.child_ctx(ctx, mover)));
        w
    }

    fn known_mover(&self, ctx: Ctx) -> usize {
        match &self.cfg.order_model {
            OrderModel::Fixed(seq) => seq[ctx.ply - 1],
            OrderModel::RoundRobin => (ctx.root + ctx.ply) % self.n,
            _ => unreachable!("mover is not fixed under this order model"),
        }
    }

    fn pool(&self, ctx: Ctx) -> Vec<usize> {
        (0..self.n)
            .filter(|&j| match self.cfg.mover_pool {
                MoverPool::Any => true,
                MoverPool::NoRepeat => j != ctx.last,
                MoverPool::Distinct => j >= 64 || ctx.used & (1u64 << j) == 0,
            })
            .collect()
    }

    /// Canonical memo key: fields that do not influence the value are
    /// normalised so equivalent nodes share an entry.
    fn key(&self, state: &G::State, ctx: Ctx) -> Key<G::State> {
        let mut c = ctx;
        match &self.cfg.order_model {
            OrderModel::Fixed(_) => {
                c.root = 0;
                c.last = NO_PLAYER;
                c.used = 0;
                c.perspective = 0;
            }
            OrderModel::RoundRobin => {
                c.root = (ctx.root + ctx.ply) % self.n;
                c.ply = 0;
                c.last = NO_PLAYER;
                c.used = 0;
                c.perspective = 0;
            }
            OrderModel::Average | OrderModel::Worst => {
                c.root = 0;
                c.ply = 0;
                if self.cfg.mover_pool != MoverPool::NoRepeat {
                    c.last = NO_PLAYER;
                }
                if self.cfg.mover_pool != MoverPool::Distinct {
                    c.used = 0;
                }
                if self.cfg.order_model == OrderModel::Average {
                    c.perspective = 0;
                }
            }
        }
        Key { state: state.clone(), ctx: c }
    }

    fn node_value(&self, state: &G::State, ctx: Ctx) -> ValueVector {
        if ctx.remaining == 0 {
            return match self.cfg.payoff_model {
                PayoffModel::Leaf => self.payoffs(state),
                PayoffModel::Path => ValueVector::zeros(self.n),
            };
        }
        let memoise = ctx.remaining >= 2;
        let key = if memoise {
            let key = self.key(state, ctx);
            if let Some(v) = self.memo.borrow().get(&key) {
                return v.clone();
            }
            Some(key)
        } else {
            None
        };
        let value = match &self.cfg.order_model {
            OrderModel::Fixed(_) | OrderModel::RoundRobin => {
                let mover = self.known_mover(ctx);
                self.choose(state, mover, ctx).2
            }
            OrderModel::Average => {
                let pool = self.pool(ctx);
                let mut acc = ValueVector::zeros(self.n);
                for &j in &pool {
                    acc.add_assign(&self.choose(state, j, ctx).2);
                }
                let m = pool.len() as f64;
                acc.0.iter_mut().for_each(|v| *v /= m);
                acc
            }
            OrderModel::Worst => self.worst_pick(state, ctx).3,
        };
        if let Some(key) = key {
            self.memo.borrow_mut().insert(key, value.clone());
        }
        value
    }

    /// The adversary's choice of mover against `ctx.perspective`. Each
    /// candidate mover picks her move under her own worst-case perspective;
    /// returns (mover, strategy, resulting state, value vector).
    fn worst_pick(&self, state: &G::State, ctx: Ctx) -> (usize, usize, G::State, ValueVector) {
        let p = ctx.perspective;
        let mut best: Option<(usize, usize, G::State, ValueVector)> = None;
        for j in self.pool(ctx) {
            let own = Ctx { perspective: j, ..ctx };
            let (strategy, child, own_value) = self.choose(state, j, own);
            let w = if j == p { own_value } else { self.after_move(&child, j, ctx) };
            let replace = match &best {
                None => true,
                // adversary minimises the perspective player's value
                Some((.., bw)) => strictly_greater(self.sign * bw.get(p), self.sign * w.get(p)),
            };
            if replace {
                best = Some((j, strategy, child, w));
            }
        }
        best.expect("mover pool is never empty after validation")
    }

    /// The mover's best candidate at an interior node: (strategy, state,
    /// value vector), lowest index on ties.
    fn choose(&self, state: &G::State, mover: usize, ctx: Ctx) -> (usize, G::State, ValueVector) {
        let children = self.game.moves(state, mover);
        let mut best: Option<(usize, ValueVector)> = None;
        for (idx, child) in children.iter().enumerate() {
            let w = self.after_move(child, mover, ctx);
            let replace = match &best {
                None => true,
                Some((_, bw)) => strictly_greater(self.sign * w.get(mover), self.sign * bw.get(mover)),
            };
            if replace {
                best = Some((idx, w));
            }
        }
        let (idx, w) = best.expect("every player has at least one move");
        (idx, children.into_iter().nth(idx).expect("index in range"), w)
    }
}
