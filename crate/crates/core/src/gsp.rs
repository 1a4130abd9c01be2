//! Generalised second-price auctions with balanced bidding.
//!
//! Slots are numbered from 0 here (slot 0 has the highest click-through
//! rate). A bidder's strategies are the balanced bids for each target slot
//! plus the truthful losing bid; the engine moves among those whose bid
//! lands in the slot it targets, so the move set is finite. The
//! enumerable state space is the set of consistent balanced profiles: every
//! bidder sits at the balanced bid for the slot it actually holds.

use std::cmp::Ordering;
use std::hash::{Hash, Hasher};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::engine::{
    enumerate_equilibria, FiniteGame, Game, LookaheadConfig, MoverPool, OrderModel, Orientation, PayoffModel,
    TOLERANCE,
};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GspInstance {
    pub ctr: Vec<f64>,
    pub valuations: Vec<f64>,
}

impl GspInstance {
    pub fn new(ctr: Vec<f64>, valuations: Vec<f64>) -> Result<Self> {
        let inst = GspInstance { ctr, valuations };
        inst.validate()?;
        Ok(inst)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let inst: GspInstance =
            serde_json::from_str(text).map_err(|e| Error::InvalidInstance(format!("GSP instance: {e}")))?;
        inst.validate()?;
        Ok(inst)
    }

    pub fn validate(&self) -> Result<()> {
        if self.ctr.is_empty() {
            return Err(Error::InvalidInstance("at least one slot is required".into()));
        }
        if self.valuations.is_empty() {
            return Err(Error::InvalidInstance("at least one bidder is required".into()));
        }
        if self.ctr.iter().any(|c| !c.is_finite() || *c <= 0.0) {
            return Err(Error::InvalidInstance("click-through rates must be positive".into()));
        }
        if self.ctr.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidInstance("click-through rates must be strictly decreasing".into()));
        }
        if self.valuations.iter().any(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::InvalidInstance("valuations must be finite and nonnegative".into()));
        }
        Ok(())
    }

    pub fn players(&self) -> usize {
        self.valuations.len()
    }

    pub fn slots(&self) -> usize {
        self.ctr.len()
    }

    /// Click-through rate of `slot`; zero for the dummy slots past the end.
    pub fn ctr_at(&self, slot: usize) -> f64 {
        self.ctr.get(slot).copied().unwrap_or(0.0)
    }

    /// Slots that can actually be filled.
    pub fn winners(&self) -> usize {
        self.slots().min(self.players())
    }

    pub fn truthful_profile(&self) -> BidProfile {
        BidProfile(self.valuations.clone())
    }

    /// Random instance with `n` bidders and `t` slots; valuations are drawn
    /// from a continuous distribution so ties have probability zero.
    pub fn random<R: Rng>(rng: &mut R, n: usize, t: usize) -> Self {
        let mut ctr: Vec<f64> = (0..t).map(|_| rng.gen_range(1.0..100.0)).collect();
        ctr.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
        for i in 1..t {
            if ctr[i] >= ctr[i - 1] {
                ctr[i] = ctr[i - 1] * 0.99;
            }
        }
        let valuations = (0..n).map(|_| rng.gen_range(1.0..100.0)).collect();
        GspInstance { ctr, valuations }
    }
}

/// Bids per player. Equality and hashing are bitwise.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct BidProfile(pub Vec<f64>);

impl BidProfile {
    pub fn bids(&self) -> &[f64] {
        &self.0
    }

    pub fn with(&self, player: usize, bid: f64) -> Self {
        let mut b = self.0.clone();
        b[player] = bid;
        BidProfile(b)
    }
}

impl PartialEq for BidProfile {
    fn eq(&self, other: &Self) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

impl Eq for BidProfile {}

impl Hash for BidProfile {
    fn hash<H: Hasher>(&self, state: &mut H) {
        for b in &self.0 {
            b.to_bits().hash(state);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Allocation {
    /// Players by descending bid, ties by index.
    pub ranking: Vec<usize>,
    pub slot_of: Vec<Option<usize>>,
    /// Price per click; zero for losers.
    pub price: Vec<f64>,
}

impl Allocation {
    /// Occupant of each filled slot.
    pub fn slot_holders(&self, slots: usize) -> &[usize] {
        &self.ranking[..slots.min(self.ranking.len())]
    }
}

fn rank(bids: &[f64]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..bids.len()).collect();
    order.sort_by(|&a, &b| bids[b].partial_cmp(&bids[a]).unwrap_or(Ordering::Equal).then(a.cmp(&b)));
    order
}

pub fn allocate(inst: &GspInstance, profile: &BidProfile) -> Allocation {
    let bids = profile.bids();
    let ranking = rank(bids);
    let mut slot_of = vec![None; bids.len()];
    let mut price = vec![0.0; bids.len()];
    for (pos, &p) in ranking.iter().enumerate().take(inst.slots()) {
        slot_of[p] = Some(pos);
        price[p] = ranking.get(pos + 1).map_or(0.0, |&q| bids[q]);
    }
    Allocation { ranking, slot_of, price }
}

pub fn utility(inst: &GspInstance, profile: &BidProfile, player: usize) -> f64 {
    player_utility(inst, &allocate(inst, profile), player)
}

fn player_utility(inst: &GspInstance, alloc: &Allocation, player: usize) -> f64 {
    match alloc.slot_of[player] {
        Some(s) => (inst.valuations[player] - alloc.price[player]) * inst.ctr[s],
        None => 0.0,
    }
}

/// Sum of value times click-through rate over the winners.
pub fn welfare(inst: &GspInstance, profile: &BidProfile) -> f64 {
    let alloc = allocate(inst, profile);
    alloc.slot_holders(inst.slots()).iter().enumerate().map(|(s, &p)| inst.valuations[p] * inst.ctr[s]).sum()
}

pub fn optimal_welfare(inst: &GspInstance) -> f64 {
    welfare(inst, &inst.truthful_profile())
}

/// True iff slots go to the same bidders as under truthful bids.
pub fn is_output_truthful(inst: &GspInstance, profile: &BidProfile) -> bool {
    let t = inst.slots();
    allocate(inst, profile).slot_holders(t) == allocate(inst, &inst.truthful_profile()).slot_holders(t)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Target {
    Slot(usize),
    Lose,
}

/// Balanced bid of `player` aiming at `target` when the next bid below would
/// be `next_bid`. The top slot and losing positions bid truthfully.
pub fn balanced_bid(inst: &GspInstance, player: usize, target: Target, next_bid: f64) -> Result<f64> {
    let v = *inst
        .valuations
        .get(player)
        .ok_or(Error::InvalidPlayer { player, players: inst.players() })?;
    match target {
        Target::Lose | Target::Slot(0) => Ok(v),
        Target::Slot(t) if t < inst.slots() => {
            let r = inst.ctr[t] / inst.ctr[t - 1];
            Ok((1.0 - r) * v + r * next_bid)
        }
        Target::Slot(t) => Err(Error::InvalidConfig(format!("target slot {t} out of range (T = {})", inst.slots()))),
    }
}

/// One candidate per target slot, then the losing bid. Each bid is balanced
/// against the current standing of the other bids.
pub fn gsp_strategy_space(inst: &GspInstance, player: usize, profile: &BidProfile) -> Vec<(Target, f64)> {
    let mut others: Vec<f64> =
        profile.bids().iter().enumerate().filter(|&(j, _)| j != player).map(|(_, &b)| b).collect();
    others.sort_by(|a, b| b.partial_cmp(a).unwrap_or(Ordering::Equal));
    let mut out: Vec<(Target, f64)> = (0..inst.slots())
        .map(|t| {
            let next = others.get(t).copied().unwrap_or(0.0);
            (Target::Slot(t), balanced_bid(inst, player, Target::Slot(t), next).expect("slot in range"))
        })
        .collect();
    out.push((Target::Lose, inst.valuations[player]));
    out
}

/// Whether bidding `bid` actually puts `player` in `target`.
pub fn realises(inst: &GspInstance, profile: &BidProfile, player: usize, target: Target, bid: f64) -> bool {
    let got = allocate(inst, &profile.with(player, bid)).slot_of[player];
    match target {
        Target::Slot(t) => got == Some(t),
        Target::Lose => got.is_none(),
    }
}

/// The candidates whose bid lands in the slot it was balanced for. A bid
/// that misses its target is not balanced for the slot it does get. Falls
/// back to the full list in the degenerate case where nothing lands.
pub fn realised_strategies(inst: &GspInstance, player: usize, profile: &BidProfile) -> Vec<(Target, f64)> {
    let all = gsp_strategy_space(inst, player, profile);
    let kept: Vec<_> = all.iter().copied().filter(|&(t, b)| realises(inst, profile, player, t, b)).collect();
    if kept.is_empty() {
        all
    } else {
        kept
    }
}

/// Profiles where every winner holds the balanced bid for its own slot and
/// every loser bids its value. One per slot assignment that is realised by
/// its own bids.
pub fn consistent_profiles(inst: &GspInstance) -> Vec<BidProfile> {
    let n = inst.players();
    let w = inst.winners();
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(w);
    let mut used = vec![false; n];
    assignments(n, w, &mut chosen, &mut used, &mut |holders| {
        let mut bids = inst.valuations.clone();
        let mut next = (0..n).filter(|p| !holders.contains(p)).map(|p| bids[p]).fold(0.0, f64::max);
        for s in (0..w).rev() {
            let p = holders[s];
            bids[p] = balanced_bid(inst, p, Target::Slot(s), next).expect("slot in range");
            next = bids[p];
        }
        let profile = BidProfile(bids);
        if allocate(inst, &profile).slot_holders(w) == holders {
            out.push(profile);
        }
    });
    out
}

fn assignments(n: usize, w: usize, chosen: &mut Vec<usize>, used: &mut [bool], f: &mut dyn FnMut(&[usize])) {
    if chosen.len() == w {
        f(chosen);
        return;
    }
    for p in 0..n {
        if !used[p] {
            used[p] = true;
            chosen.push(p);
            assignments(n, w, chosen, used, f);
            chosen.pop();
            used[p] = false;
        }
    }
}

fn myopic_best(inst: &GspInstance, profile: &BidProfile, player: usize) -> BidProfile {
    let mut best: Option<(f64, BidProfile)> = None;
    for (_, bid) in realised_strategies(inst, player, profile) {
        let next = profile.with(player, bid);
        let u = utility(inst, &next, player);
        if best.as_ref().is_none_or(|(bu, _)| u > bu + TOLERANCE * bu.abs().max(u.abs()).max(1.0)) {
            best = Some((u, next));
        }
    }
    best.expect("strategy space is never empty").1
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SuccessorOrder {
    Worst,
    Average,
}

/// Two-step leaf utility of `player` bidding `bid`: her utility after some
/// bidder j replies with a myopic best response, minimised or averaged over
/// j. With `include_self` false the bidder herself is not a successor.
pub fn lookahead_utility(
    inst: &GspInstance,
    profile: &BidProfile,
    player: usize,
    bid: f64,
    order: SuccessorOrder,
    include_self: bool,
) -> f64 {
    let after = profile.with(player, bid);
    let values: Vec<f64> = (0..inst.players())
        .filter(|&j| include_self || j != player)
        .map(|j| utility(inst, &myopic_best(inst, &after, j), player))
        .collect();
    if values.is_empty() {
        return utility(inst, &after, player);
    }
    match order {
        SuccessorOrder::Worst => values.iter().cloned().fold(f64::INFINITY, f64::min),
        SuccessorOrder::Average => values.iter().sum::<f64>() / values.len() as f64,
    }
}

/// Direct equilibrium test: no bidder has a candidate whose two-step utility
/// strictly beats keeping her current bid.
pub fn is_two_step_equilibrium(inst: &GspInstance, profile: &BidProfile, order: SuccessorOrder, include_self: bool) -> bool {
    (0..inst.players()).all(|i| {
        let stay = lookahead_utility(inst, profile, i, profile.bids()[i], order, include_self);
        realised_strategies(inst, i, profile).iter().all(|&(_, bid)| {
            let u = lookahead_utility(inst, profile, i, bid, order, include_self);
            u <= stay + TOLERANCE * u.abs().max(stay.abs()).max(1.0)
        })
    })
}

/// Depth-2 leaf-model configuration for the engine.
pub fn two_step_config(players: usize, order: SuccessorOrder, include_self: bool) -> LookaheadConfig {
    let order = match order {
        SuccessorOrder::Worst => OrderModel::Worst,
        SuccessorOrder::Average => OrderModel::Average,
    };
    let cfg = LookaheadConfig::uniform(players, 2, PayoffModel::Leaf, order);
    if include_self || players < 2 {
        cfg
    } else {
        cfg.with_pool(MoverPool::NoRepeat)
    }
}

/// The auction as an engine game over bid profiles.
#[derive(Clone, Debug)]
pub struct GspGame {
    inst: GspInstance,
    states: Vec<BidProfile>,
}

impl GspGame {
    pub fn new(inst: GspInstance) -> Result<Self> {
        inst.validate()?;
        let states = consistent_profiles(&inst);
        Ok(GspGame { inst, states })
    }

    pub fn instance(&self) -> &GspInstance {
        &self.inst
    }
}

impl Game for GspGame {
    type State = BidProfile;

    fn num_players(&self) -> usize {
        self.inst.players()
    }

    fn orientation(&self) -> Orientation {
        Orientation::Maximize
    }

    fn payoff(&self, player: usize, state: &BidProfile) -> f64 {
        utility(&self.inst, state, player)
    }

    fn social_value(&self, state: &BidProfile) -> f64 {
        welfare(&self.inst, state)
    }

    fn moves(&self, state: &BidProfile, player: usize) -> Vec<BidProfile> {
        realised_strategies(&self.inst, player, state).into_iter().map(|(_, b)| state.with(player, b)).collect()
    }

    fn check_state(&self, state: &BidProfile) -> Result<()> {
        if state.0.len() != self.inst.players() {
            return Err(Error::InvalidState(format!(
                "profile has {} bids for {} bidders",
                state.0.len(),
                self.inst.players()
            )));
        }
        if state.0.iter().any(|b| !b.is_finite() || *b < 0.0) {
            return Err(Error::InvalidState("bids must be finite and nonnegative".into()));
        }
        Ok(())
    }

    fn known_optimum(&self) -> Option<f64> {
        Some(optimal_welfare(&self.inst))
    }
}

impl FiniteGame for GspGame {
    fn state_count(&self) -> u128 {
        self.states.len() as u128
    }

    fn states(&self) -> Vec<BidProfile> {
        self.states.clone()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GspRow {
    pub instance_id: String,
    pub order_model: SuccessorOrder,
    pub equilibrium_id: usize,
    pub welfare: f64,
    pub opt_welfare: f64,
    pub output_truthful: bool,
}

/// Enumerates the two-step leaf equilibria among consistent profiles.
pub fn analyse_instance(
    inst: &GspInstance,
    instance_id: &str,
    order: SuccessorOrder,
    include_self: bool,
    cap: u128,
) -> Result<Vec<GspRow>> {
    let game = GspGame::new(inst.clone())?;
    let cfg = two_step_config(inst.players(), order, include_self);
    let opt = optimal_welfare(inst);
    Ok(enumerate_equilibria(&game, &cfg, cap)?
        .iter()
        .enumerate()
        .map(|(k, s)| GspRow {
            instance_id: instance_id.to_string(),
            order_model: order,
            equilibrium_id: k,
            welfare: welfare(inst, s),
            opt_welfare: opt,
            output_truthful: is_output_truthful(inst, s),
        })
        .collect())
}

/// Profile in which bidder s holds slot s for every s, built bottom-up from
/// balanced bids.
pub fn slot_order_profile(inst: &GspInstance) -> BidProfile {
    let mut bids = inst.valuations.clone();
    let w = inst.winners();
    let mut next = inst.valuations[w..].iter().cloned().fold(0.0, f64::max);
    for s in (0..w).rev() {
        bids[s] = balanced_bid(inst, s, Target::Slot(s), next).expect("slot in range");
        next = bids[s];
    }
    BidProfile(bids)
}
