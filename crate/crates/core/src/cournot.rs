//! Cournot duopoly under k-lookahead in the path model.
//!
//! Demand is normalised to price `1 - q_i - q_j` with zero marginal cost. A
//! firm searching k moves ahead chooses `q = beta - alpha * q_other`, where
//! the pair `(alpha, beta)` comes from a backward recursion over the turns
//! left before the horizon. [`CournotGrid`] is the same game on a finite
//! quantity grid so the generic engine can cross-check the closed form.

use serde::{Deserialize, Serialize};

use crate::engine::{all_profiles, check_profile, profile_count, profile_moves, FiniteGame, Game, Orientation, StateProfile};
use crate::error::{Error, Result};

/// Reaction coefficients indexed by distance from the end of the horizon:
/// entry `d` governs the move made with `d` turns still to come.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CournotCoefficients {
    pub horizon: usize,
    pub alpha: Vec<f64>,
    pub beta: Vec<f64>,
}

impl CournotCoefficients {
    /// (alpha_0, beta_0): the current move is `beta_0 - alpha_0 * q_other`.
    pub fn current(&self) -> (f64, f64) {
        (self.alpha[self.horizon - 1], self.beta[self.horizon - 1])
    }

    pub fn reaction(&self, q_other: f64) -> f64 {
        let (a, b) = self.current();
        b - a * q_other
    }
}

pub fn coefficients(k: usize) -> Result<CournotCoefficients> {
    if k < 1 {
        return Err(Error::InvalidConfig("Cournot horizon must be at least 1".into()));
    }
    let mut alpha = vec![0.5, 1.0 / 3.0];
    let mut beta = vec![0.5, 0.5];
    for d in 2..k {
        let (a1, a2) = (alpha[d - 1], alpha[d - 2]);
        let (b1, b2) = (beta[d - 1], beta[d - 2]);
        let denom = 4.0 - 2.0 * a1 - a1 * a1 * a2;
        alpha.push(1.0 / denom);
        beta.push((2.0 - b1 + a1 * b2 - a1 * a2 * b1) / denom);
    }
    alpha.truncate(k);
    beta.truncate(k);
    Ok(CournotCoefficients { horizon: k, alpha, beta })
}

/// Symmetric outcome where both firms produce `q`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CournotOutcome {
    pub q: f64,
}

impl CournotOutcome {
    pub fn total_output(&self) -> f64 {
        2.0 * self.q
    }

    pub fn price(&self) -> f64 {
        1.0 - 2.0 * self.q
    }

    pub fn firm_profit(&self) -> f64 {
        self.q * (1.0 - 2.0 * self.q)
    }

    pub fn consumer_surplus(&self) -> f64 {
        2.0 * self.q * self.q
    }

    pub fn social_surplus(&self) -> f64 {
        2.0 * self.q * (1.0 - self.q)
    }
}

/// Symmetric fixed point of the k-lookahead reaction function.
pub fn equilibrium_quantity(k: usize) -> Result<CournotOutcome> {
    let (a, b) = coefficients(k)?.current();
    Ok(CournotOutcome { q: b / (1.0 + a) })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ForesightRow {
    pub k: usize,
    pub alpha0: f64,
    pub beta0: f64,
    pub q: f64,
    pub output_gain_pct: f64,
    pub surplus_gain_pct: f64,
}

/// Output and surplus against the myopic (k = 1) equilibrium for
/// k = 1..=k_max.
pub fn foresight_curve(k_max: usize) -> Result<Vec<ForesightRow>> {
    if k_max < 1 {
        return Err(Error::InvalidConfig("k_max must be at least 1".into()));
    }
    let coeffs = coefficients(k_max)?;
    let myopic = equilibrium_quantity(1)?;
    Ok((1..=k_max)
        .map(|k| {
            let (alpha0, beta0) = (coeffs.alpha[k - 1], coeffs.beta[k - 1]);
            let out = CournotOutcome { q: beta0 / (1.0 + alpha0) };
            ForesightRow {
                k,
                alpha0,
                beta0,
                q: out.q,
                output_gain_pct: 100.0 * (out.total_output() / myopic.total_output() - 1.0),
                surplus_gain_pct: 100.0 * (out.social_surplus() / myopic.social_surplus() - 1.0),
            }
        })
        .collect())
}

/// Limit of alpha_0 as the horizon grows: the root of
/// `a = 1 / (4 - 2a - a^3)` in (0, 1/2), found by fixed-point iteration.
pub fn limiting_alpha() -> f64 {
    let mut a = 0.3;
    for _ in 0..200 {
        a = 1.0 / (4.0 - 2.0 * a - a * a * a);
    }
    a
}

/// Leaf-model quantities (leader, follower) when one firm searches
/// `leader_depth` moves and the other `follower_depth`.
///
/// Supported: (1, 1), the Cournot point, and (2, 1), where the leader
/// anticipates the follower's myopic reply `(1 - q) / 2` and so maximises
/// `q (1 - q) / 2`.
pub fn stackelberg_quantities(leader_depth: usize, follower_depth: usize) -> Result<(f64, f64)> {
    match (leader_depth, follower_depth) {
        (1, 1) => Ok((1.0 / 3.0, 1.0 / 3.0)),
        (2, 1) => {
            let leader = 0.5;
            Ok((leader, myopic_reply(leader)))
        }
        _ => Err(Error::InvalidConfig(format!(
            "leaf-model quantities are closed-form only for depths (1,1) and (2,1), got ({leader_depth},{follower_depth})"
        ))),
    }
}

pub fn stackelberg_check() -> (f64, f64) {
    stackelberg_quantities(2, 1).expect("supported depths")
}

pub fn myopic_reply(q_other: f64) -> f64 {
    ((1.0 - q_other) / 2.0).max(0.0)
}

pub fn profit(q_own: f64, q_other: f64) -> f64 {
    q_own * (1.0 - q_own - q_other)
}

/// Two firms choosing quantities from `{0, step, 2 step, ..., 1/2}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CournotGrid {
    points: usize,
    step: f64,
}

impl CournotGrid {
    /// Grid with `divisions` steps per unit quantity, covering [0, 1/2].
    pub fn new(divisions: usize) -> Result<Self> {
        if divisions < 2 || !divisions.is_multiple_of(2) {
            return Err(Error::InvalidInstance("grid divisions must be a positive even number".into()));
        }
        Ok(CournotGrid { points: divisions / 2 + 1, step: 1.0 / divisions as f64 })
    }

    pub fn step(&self) -> f64 {
        self.step
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn quantity(&self, index: usize) -> f64 {
        index as f64 * self.step
    }

    /// Grid index nearest to `q`, clamped to the grid.
    pub fn nearest(&self, q: f64) -> usize {
        ((q / self.step).round().max(0.0) as usize).min(self.points - 1)
    }
}

impl Game for CournotGrid {
    type State = StateProfile;

    fn num_players(&self) -> usize {
        2
    }

    fn orientation(&self) -> Orientation {
        Orientation::Maximize
    }

    fn payoff(&self, player: usize, state: &StateProfile) -> f64 {
        profit(self.quantity(state[player]), self.quantity(state[1 - player]))
    }

    /// Producer plus consumer surplus.
    fn social_value(&self, state: &StateProfile) -> f64 {
        let total = self.quantity(state[0]) + self.quantity(state[1]);
        total - total * total / 2.0
    }

    fn moves(&self, state: &StateProfile, player: usize) -> Vec<StateProfile> {
        profile_moves(state, player, self.points)
    }

    fn check_state(&self, state: &StateProfile) -> Result<()> {
        check_profile(state, &[self.points, self.points])
    }
}

impl FiniteGame for CournotGrid {
    fn state_count(&self) -> u128 {
        profile_count(&[self.points, self.points])
    }

    fn states(&self) -> Vec<StateProfile> {
        all_profiles(&[self.points, self.points])
    }
}
