use std::fmt;
use std::hash::Hash;
use std::ops::Index;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Whether players seek to maximise payoffs or minimise costs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Maximize,
    Minimize,
}

impl Orientation {
    /// +1 for maximising games, -1 for minimising ones. Multiplying a payoff by
    /// this turns every comparison into a maximisation.
    pub fn sign(self) -> f64 {
        match self {
            Orientation::Maximize => 1.0,
            Orientation::Minimize => -1.0,
        }
    }

    /// Coordination ratio of `value` against the social optimum, always >= 1
    /// for a feasible value.
    pub fn ratio(self, value: f64, optimum: f64) -> f64 {
        let (num, den) = match self {
            Orientation::Maximize => (optimum, value),
            Orientation::Minimize => (value, optimum),
        };
        if den == 0.0 {
            if num == 0.0 {
                1.0
            } else {
                f64::INFINITY
            }
        } else {
            num / den
        }
    }

    /// Whether `a` is a strictly better outcome than `b` under this
    /// orientation, beyond the engine's relative tolerance.
    pub fn improves(self, a: f64, b: f64) -> bool {
        strictly_greater(self.sign() * a, self.sign() * b)
    }
}

/// Relative tolerance used for every "improving" and "tie" decision.
pub const TOLERANCE: f64 = 1e-9;

pub(crate) fn strictly_greater(a: f64, b: f64) -> bool {
    a > b + TOLERANCE * a.abs().max(b.abs()).max(1.0)
}

/// A game the lookahead engine can search.
///
/// `moves` lists the successor states reachable when `player` moves, one per
/// candidate strategy, in canonical order. The position in that list is the
/// strategy index reported by the engine.
pub trait Game {
    type State: Clone + Eq + Hash + fmt::Debug;

    fn num_players(&self) -> usize;

    fn orientation(&self) -> Orientation;

    fn payoff(&self, player: usize, state: &Self::State) -> f64;

    /// Every player's payoff at `state`. Override when the payoffs share
    /// work.
    fn payoffs(&self, state: &Self::State) -> Vec<f64> {
        (0..self.num_players()).map(|p| self.payoff(p, state)).collect()
    }

    fn social_value(&self, state: &Self::State) -> f64;

    fn moves(&self, state: &Self::State, player: usize) -> Vec<Self::State>;

    fn check_state(&self, _state: &Self::State) -> Result<()> {
        Ok(())
    }

    /// Social optimum when it is known without enumeration.
    fn known_optimum(&self) -> Option<f64> {
        None
    }
}

/// A game whose whole state space can be listed.
pub trait FiniteGame: Game {
    /// Number of states, saturating at `u128::MAX`.
    fn state_count(&self) -> u128;

    fn states(&self) -> Vec<Self::State>;
}

/// One strategy index per player.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateProfile(pub Vec<usize>);

impl StateProfile {
    pub fn new(choices: Vec<usize>) -> Self {
        StateProfile(choices)
    }

    pub fn choices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Copy of this profile with `player` switched to `strategy`.
    pub fn with(&self, player: usize, strategy: usize) -> Self {
        let mut next = self.clone();
        next.0[player] = strategy;
        next
    }
}

impl Index<usize> for StateProfile {
    type Output = usize;

    fn index(&self, player: usize) -> &usize {
        &self.0[player]
    }
}

impl From<Vec<usize>> for StateProfile {
    fn from(v: Vec<usize>) -> Self {
        StateProfile(v)
    }
}

impl fmt::Display for StateProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, ")")
    }
}

/// Every profile reachable by changing `player`'s strategy, in index order.
pub fn profile_moves(state: &StateProfile, player: usize, count: usize) -> Vec<StateProfile> {
    (0..count).map(|s| state.with(player, s)).collect()
}

/// Checks a profile against per-player strategy counts.
pub fn check_profile(state: &StateProfile, counts: &[usize]) -> Result<()> {
    if state.len() != counts.len() {
        return Err(Error::InvalidState(format!(
            "profile has {} entries, game has {} players",
            state.len(),
            counts.len()
        )));
    }
    for (player, (&s, &c)) in state.0.iter().zip(counts).enumerate() {
        if s >= c {
            return Err(Error::InvalidState(format!(
                "player {player} plays strategy {s} but has only {c}"
            )));
        }
    }
    Ok(())
}

/// Size of the product of strategy sets, saturating.
pub fn profile_count(counts: &[usize]) -> u128 {
    counts
        .iter()
        .fold(1u128, |acc, &c| acc.saturating_mul(c as u128))
}

/// All profiles in lexicographic order (player 0 most significant).
pub fn all_profiles(counts: &[usize]) -> Vec<StateProfile> {
    if counts.contains(&0) {
        return Vec::new();
    }
    let total = profile_count(counts) as usize;
    let mut out = Vec::with_capacity(total);
    let mut cur = vec![0usize; counts.len()];
    loop {
        out.push(StateProfile(cur.clone()));
        let mut pos = counts.len();
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            cur[pos] += 1;
            if cur[pos] < counts[pos] {
                break;
            }
            cur[pos] = 0;
        }
    }
}

type PayoffFn = Arc<dyn Fn(usize, &StateProfile) -> f64 + Send + Sync>;
type SocialFn = Arc<dyn Fn(&StateProfile) -> f64 + Send + Sync>;

/// A finite strategic game given by labelled strategy sets and payoff
/// closures.
#[derive(Clone)]
pub struct GameDescription {
    strategies: Vec<Vec<String>>,
    counts: Vec<usize>,
    orientation: Orientation,
    payoff: PayoffFn,
    social: SocialFn,
}

impl fmt::Debug for GameDescription {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GameDescription")
            .field("strategies", &self.strategies)
            .field("orientation", &self.orientation)
            .finish_non_exhaustive()
    }
}

impl GameDescription {
    pub fn new<P, S>(
        strategies: Vec<Vec<String>>,
        orientation: Orientation,
        payoff: P,
        social_value: S,
    ) -> Result<Self>
    where
        P: Fn(usize, &StateProfile) -> f64 + Send + Sync + 'static,
        S: Fn(&StateProfile) -> f64 + Send + Sync + 'static,
    {
        if strategies.is_empty() {
            return Err(Error::InvalidInstance("a game needs at least one player".into()));
        }
        if let Some(p) = strategies.iter().position(|s| s.is_empty()) {
            return Err(Error::InvalidInstance(format!("player {p} has no strategies")));
        }
        let counts = strategies.iter().map(Vec::len).collect();
        Ok(GameDescription {
            strategies,
            counts,
            orientation,
            payoff: Arc::new(payoff),
            social: Arc::new(social_value),
        })
    }

    /// Game whose strategies are labelled by their indices and whose social
    /// value is the sum of payoffs.
    pub fn utilitarian<P>(counts: &[usize], orientation: Orientation, payoff: P) -> Result<Self>
    where
        P: Fn(usize, &StateProfile) -> f64 + Send + Sync + 'static,
    {
        let n = counts.len();
        let payoff = Arc::new(payoff);
        let social_payoff = Arc::clone(&payoff);
        Self::new(
            counts
                .iter()
                .map(|&c| (0..c).map(|s| s.to_string()).collect())
                .collect(),
            orientation,
            move |p, s| payoff(p, s),
            move |s| (0..n).map(|p| social_payoff(p, s)).sum(),
        )
    }

    /// Game backed by an explicit table: `table[profile_index][player]`, with
    /// profiles in the order of [`all_profiles`].
    pub fn tabular(counts: &[usize], orientation: Orientation, table: Vec<Vec<f64>>) -> Result<Self> {
        let expected = profile_count(counts);
        if table.len() as u128 != expected {
            return Err(Error::InvalidInstance(format!(
                "payoff table has {} rows, expected {expected}",
                table.len()
            )));
        }
        if table.iter().any(|row| row.len() != counts.len()) {
            return Err(Error::InvalidInstance("payoff row length differs from player count".into()));
        }
        let counts_owned = counts.to_vec();
        let table = Arc::new(table);
        Self::utilitarian(counts, orientation, move |p, s| {
            table[profile_index(&counts_owned, s)][p]
        })
    }

    pub fn strategy_counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn strategy_label(&self, player: usize, strategy: usize) -> &str {
        &self.strategies[player][strategy]
    }
}

/// Position of `state` in the order of [`all_profiles`].
pub fn profile_index(counts: &[usize], state: &StateProfile) -> usize {
    state
        .0
        .iter()
        .zip(counts)
        .fold(0usize, |acc, (&s, &c)| acc * c + s)
}

impl Game for GameDescription {
    type State = StateProfile;

    fn num_players(&self) -> usize {
        self.counts.len()
    }

    fn orientation(&self) -> Orientation {
        self.orientation
    }

    fn payoff(&self, player: usize, state: &StateProfile) -> f64 {
        (self.payoff)(player, state)
    }

    fn social_value(&self, state: &StateProfile) -> f64 {
        (self.social)(state)
    }

    fn moves(&self, state: &StateProfile, player: usize) -> Vec<StateProfile> {
        profile_moves(state, player, self.counts[player])
    }

    fn check_state(&self, state: &StateProfile) -> Result<()> {
        check_profile(state, &self.counts)
    }
}

impl FiniteGame for GameDescription {
    fn state_count(&self) -> u128 {
        profile_count(&self.counts)
    }

    fn states(&self) -> Vec<StateProfile> {
        all_profiles(&self.counts)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profiles_enumerate_in_lexicographic_order() {
        let all = all_profiles(&[2, 3]);
        assert_eq!(all.len(), 6);
        assert_eq!(all[0].choices(), &[0, 0]);
        assert_eq!(all[1].choices(), &[0, 1]);
        assert_eq!(all[5].choices(), &[1, 2]);
        for (i, p) in all.iter().enumerate() {
            assert_eq!(profile_index(&[2, 3], p), i);
        }
    }

    #[test]
    fn empty_strategy_set_is_rejected() {
        let err = GameDescription::utilitarian(&[2, 0], Orientation::Maximize, |_, _| 0.0);
        assert!(matches!(err, Err(Error::InvalidInstance(_))));
    }

    #[test]
    fn out_of_range_strategy_is_rejected() {
        let g = GameDescription::utilitarian(&[2, 2], Orientation::Maximize, |_, _| 0.0).unwrap();
        assert!(g.check_state(&StateProfile::new(vec![0, 2])).is_err());
        assert!(g.check_state(&StateProfile::new(vec![0])).is_err());
        assert!(g.check_state(&StateProfile::new(vec![1, 1])).is_ok());
    }

    #[test]
    fn ratio_orientation() {
        assert_eq!(Orientation::Maximize.ratio(5.0, 10.0), 2.0);
        assert_eq!(Orientation::Minimize.ratio(10.0, 5.0), 2.0);
        assert_eq!(Orientation::Minimize.ratio(0.0, 0.0), 1.0);
        assert!(Orientation::Maximize.ratio(0.0, 1.0).is_infinite());
    }
}
